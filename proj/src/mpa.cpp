#include "scma/mpa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace scma {

namespace {

constexpr double kUnderflowFloor = 1e-300;

inline double sq(double d) { return d * d; }
inline double sq(cplx d) { return d.real() * d.real() + d.imag() * d.imag(); }

template <typename T>
double density_prefactor(const NoiseModel& noise) {
    if constexpr (std::is_same_v<T, cplx>)
        return 1.0 / (std::numbers::pi * noise.n0);
    else
        return 1.0 / std::sqrt(std::numbers::pi * noise.n0);  // 1/sqrt(2 pi sigma^2)
}

// Shared exhaustive enumeration. The per-combo sum and probability product
// are maintained through prefix arrays so an odometer step only refreshes
// the digits at and above the carry position.
template <typename T>
void resource_update_core(MessageSet& msgs, const std::vector<T>& y,
                          const EdgeComponents<T>& comps, const NoiseModel& noise,
                          const FactorGraph& g) {
    const int mc = msgs.num_codewords;
    const double inv_n0 = 1.0 / noise.n0;  // equals 1/(2 sigma^2) in the real field
    const double prefactor = density_prefactor<T>(noise);

    std::vector<const T*> other_comp;
    std::vector<const double*> other_v;
    std::vector<int> digit;
    std::vector<T> sum_pre;
    std::vector<double> prod_pre;
    std::vector<T> dm(mc);

    for (int k = 0; k < g.num_resources; ++k) {
        const auto& nbrs = g.resource_adj[k];
        const int df = static_cast<int>(nbrs.size());
        for (int a = 0; a < df; ++a) {
            const int e = g.edge(nbrs[a], k);
            const T* xm = comps.at(e);
            double* out = msgs.u_at(e);
            for (int m = 0; m < mc; ++m) dm[m] = y[k] - xm[m];

            if (df == 1) {
                for (int m = 0; m < mc; ++m)
                    out[m] = prefactor * std::exp(-sq(dm[m]) * inv_n0);
                continue;
            }

            other_comp.clear();
            other_v.clear();
            for (int b = 0; b < df; ++b) {
                if (b == a) continue;
                const int oe = g.edge(nbrs[b], k);
                other_comp.push_back(comps.at(oe));
                other_v.push_back(msgs.v_at(oe));
            }
            const int slots = df - 1;
            digit.assign(slots, 0);
            sum_pre.assign(slots + 1, T{});
            prod_pre.assign(slots + 1, 0.0);
            prod_pre[0] = 1.0;
            std::fill(out, out + mc, 0.0);

            int refill = 0;
            for (;;) {
                for (int t = refill; t < slots; ++t) {
                    sum_pre[t + 1] = sum_pre[t] + other_comp[t][digit[t]];
                    prod_pre[t + 1] = prod_pre[t] * other_v[t][digit[t]];
                }
                const T s = sum_pre[slots];
                const double p = prod_pre[slots];
                for (int m = 0; m < mc; ++m)
                    out[m] += p * std::exp(-sq(dm[m] - s) * inv_n0);

                int t = slots - 1;
                while (t >= 0 && ++digit[t] == mc) digit[t--] = 0;
                if (t < 0) break;
                refill = t;
            }
            for (int m = 0; m < mc; ++m) out[m] *= prefactor;
        }
    }
}

// Log-domain twin of resource_update_core with streaming exact log-sum-exp.
template <typename T>
void resource_update_log(std::vector<double>& lu, const std::vector<double>& lv,
                         const std::vector<T>& y, const EdgeComponents<T>& comps,
                         const NoiseModel& noise, const FactorGraph& g, int mc) {
    const double inv_n0 = 1.0 / noise.n0;
    const double log_prefactor = std::log(density_prefactor<T>(noise));

    std::vector<const T*> other_comp;
    std::vector<const double*> other_lv;
    std::vector<int> digit;
    std::vector<T> sum_pre;
    std::vector<double> lsum_pre;
    std::vector<T> dm(mc);
    std::vector<double> run_max(mc), run_acc(mc);

    for (int k = 0; k < g.num_resources; ++k) {
        const auto& nbrs = g.resource_adj[k];
        const int df = static_cast<int>(nbrs.size());
        for (int a = 0; a < df; ++a) {
            const int e = g.edge(nbrs[a], k);
            const T* xm = comps.at(e);
            double* out = lu.data() + static_cast<std::size_t>(e) * mc;
            for (int m = 0; m < mc; ++m) dm[m] = y[k] - xm[m];

            if (df == 1) {
                for (int m = 0; m < mc; ++m)
                    out[m] = log_prefactor - sq(dm[m]) * inv_n0;
                continue;
            }

            other_comp.clear();
            other_lv.clear();
            for (int b = 0; b < df; ++b) {
                if (b == a) continue;
                const int oe = g.edge(nbrs[b], k);
                other_comp.push_back(comps.at(oe));
                other_lv.push_back(lv.data() + static_cast<std::size_t>(oe) * mc);
            }
            const int slots = df - 1;
            digit.assign(slots, 0);
            sum_pre.assign(slots + 1, T{});
            lsum_pre.assign(slots + 1, 0.0);
            std::fill(run_max.begin(), run_max.end(),
                      -std::numeric_limits<double>::infinity());
            std::fill(run_acc.begin(), run_acc.end(), 0.0);

            int refill = 0;
            for (;;) {
                for (int t = refill; t < slots; ++t) {
                    sum_pre[t + 1] = sum_pre[t] + other_comp[t][digit[t]];
                    lsum_pre[t + 1] = lsum_pre[t] + other_lv[t][digit[t]];
                }
                const T s = sum_pre[slots];
                const double lp = lsum_pre[slots];
                for (int m = 0; m < mc; ++m) {
                    const double term = lp - sq(dm[m] - s) * inv_n0;
                    if (term <= run_max[m]) {
                        run_acc[m] += std::exp(term - run_max[m]);
                    } else {
                        run_acc[m] = run_acc[m] * std::exp(run_max[m] - term) + 1.0;
                        run_max[m] = term;
                    }
                }
                int t = slots - 1;
                while (t >= 0 && ++digit[t] == mc) digit[t--] = 0;
                if (t < 0) break;
                refill = t;
            }
            for (int m = 0; m < mc; ++m)
                out[m] = log_prefactor + run_max[m] + std::log(run_acc[m]);
        }
    }
}

int argmax_lowest(const std::vector<double>& scores) {
    int best = 0;
    for (int m = 1; m < static_cast<int>(scores.size()); ++m)
        if (scores[m] > scores[best]) best = m;
    return best;
}

}  // namespace

MessageSet init_messages(const FactorGraph& g, int num_codewords) {
    if (num_codewords < 1) throw std::invalid_argument("init_messages: M must be >= 1");
    MessageSet msgs;
    msgs.num_codewords = num_codewords;
    const std::size_t total = static_cast<std::size_t>(g.num_edges) * num_codewords;
    msgs.v.assign(total, 1.0 / num_codewords);
    msgs.u.assign(total, 0.0);
    return msgs;
}

EdgeComponents<cplx> make_edge_components(const Codebook& cb, const FactorGraph& g) {
    EdgeComponents<cplx> comps;
    comps.num_codewords = cb.num_codewords;
    comps.values.resize(static_cast<std::size_t>(g.num_edges) * cb.num_codewords);
    for (int j = 0; j < g.num_layers; ++j)
        for (int k : g.layer_adj[j]) {
            cplx* dst = comps.at(g.edge(j, k));
            for (int m = 0; m < cb.num_codewords; ++m) dst[m] = cb.entry(j, m, k);
        }
    return comps;
}

EdgeComponents<double> make_real_components(const SeparableView& view, const FactorGraph& g) {
    EdgeComponents<double> comps;
    comps.num_codewords = view.real_count;
    comps.values.resize(static_cast<std::size_t>(g.num_edges) * view.real_count);
    for (int j = 0; j < g.num_layers; ++j)
        for (int k : g.layer_adj[j]) {
            double* dst = comps.at(g.edge(j, k));
            for (int r = 0; r < view.real_count; ++r)
                dst[r] = view.real_parts[j][static_cast<std::size_t>(r) * g.num_resources + k];
        }
    return comps;
}

EdgeComponents<double> make_imag_components(const SeparableView& view, const FactorGraph& g) {
    EdgeComponents<double> comps;
    comps.num_codewords = view.imag_count;
    comps.values.resize(static_cast<std::size_t>(g.num_edges) * view.imag_count);
    for (int j = 0; j < g.num_layers; ++j)
        for (int k : g.layer_adj[j]) {
            double* dst = comps.at(g.edge(j, k));
            for (int q = 0; q < view.imag_count; ++q)
                dst[q] = view.imag_parts[j][static_cast<std::size_t>(q) * g.num_resources + k];
        }
    return comps;
}

void update_resource_messages(MessageSet& msgs, const std::vector<double>& y,
                              const EdgeComponents<double>& comps, const NoiseModel& noise,
                              const FactorGraph& g) {
    resource_update_core<double>(msgs, y, comps, noise, g);
}

void update_resource_messages(MessageSet& msgs, const ReceivedSignal& y,
                              const EdgeComponents<cplx>& comps, const NoiseModel& noise,
                              const FactorGraph& g) {
    resource_update_core<cplx>(msgs, y, comps, noise, g);
}

void update_resource_messages(MessageSet& msgs, const ReceivedSignal& y, const Codebook& cb,
                              const NoiseModel& noise, const FactorGraph& g) {
    const auto comps = make_edge_components(cb, g);
    resource_update_core<cplx>(msgs, y, comps, noise, g);
}

void update_layer_messages(MessageSet& msgs, const FactorGraph& g) {
    const int mc = msgs.num_codewords;
    for (int j = 0; j < g.num_layers; ++j) {
        const auto& res = g.layer_adj[j];
        for (int k : res) {
            double* v = msgs.v_at(g.edge(j, k));
            std::fill(v, v + mc, 1.0);
            for (int l : res) {
                if (l == k) continue;
                const double* u = msgs.u_at(g.edge(j, l));
                for (int m = 0; m < mc; ++m) v[m] *= u[m];
            }
            double sum = 0.0;
            for (int m = 0; m < mc; ++m) sum += v[m];
            if (sum < kUnderflowFloor) {
                std::fill(v, v + mc, 1.0 / mc);
                ++msgs.underflow_replacements;
            } else {
                const double inv = 1.0 / sum;
                for (int m = 0; m < mc; ++m) v[m] *= inv;
            }
        }
    }
}

DetectionResult decide(const MessageSet& msgs, const FactorGraph& g) {
    const int mc = msgs.num_codewords;
    DetectionResult res;
    res.decided.resize(g.num_layers);
    res.scores.assign(g.num_layers, std::vector<double>(mc, 1.0));
    for (int j = 0; j < g.num_layers; ++j) {
        auto& s = res.scores[j];
        for (int k : g.layer_adj[j]) {
            const double* u = msgs.u_at(g.edge(j, k));
            for (int m = 0; m < mc; ++m) s[m] *= u[m];
        }
        res.decided[j] = argmax_lowest(s);
    }
    res.diag.underflow_replacements = msgs.underflow_replacements;
    return res;
}

SplitBasis make_split_basis(const Codebook& cb, const FactorGraph& g) {
    auto view = try_separate(cb);
    if (!view) throw std::invalid_argument("split detector: codebook is not separable");
    SplitBasis basis;
    basis.num_codewords = cb.num_codewords;
    basis.view = std::move(*view);
    basis.real_comps = make_real_components(basis.view, g);
    basis.imag_comps = make_imag_components(basis.view, g);
    return basis;
}

DetectionResult detect_mpa(const ReceivedSignal& y, const Codebook& cb, const FactorGraph& g,
                           const NoiseModel& noise, int iterations) {
    return detect_mpa(y, make_edge_components(cb, g), g, noise, iterations);
}

DetectionResult detect_mpa(const ReceivedSignal& y, const EdgeComponents<cplx>& comps,
                           const FactorGraph& g, const NoiseModel& noise, int iterations) {
    if (iterations < 1) throw std::invalid_argument("detect_mpa: iterations must be >= 1");
    MessageSet msgs = init_messages(g, comps.num_codewords);
    for (int it = 0; it < iterations; ++it) {
        resource_update_core<cplx>(msgs, y, comps, noise, g);
        update_layer_messages(msgs, g);
    }
    return decide(msgs, g);
}

DetectionResult detect_llr_mpa(const ReceivedSignal& y, const Codebook& cb, const FactorGraph& g,
                               const NoiseModel& noise, int iterations) {
    return detect_llr_mpa(y, make_edge_components(cb, g), g, noise, iterations);
}

DetectionResult detect_llr_mpa(const ReceivedSignal& y, const EdgeComponents<cplx>& comps,
                               const FactorGraph& g, const NoiseModel& noise, int iterations) {
    if (iterations < 1) throw std::invalid_argument("detect_llr_mpa: iterations must be >= 1");
    const int mc = comps.num_codewords;
    const std::size_t total = static_cast<std::size_t>(g.num_edges) * mc;
    std::vector<double> lv(total, -std::log(static_cast<double>(mc)));
    std::vector<double> lu(total, 0.0);

    for (int it = 0; it < iterations; ++it) {
        resource_update_log<cplx>(lu, lv, y, comps, noise, g, mc);
        // layer update + normalization, all additive
        for (int j = 0; j < g.num_layers; ++j) {
            const auto& res = g.layer_adj[j];
            for (int k : res) {
                double* v = lv.data() + static_cast<std::size_t>(g.edge(j, k)) * mc;
                std::fill(v, v + mc, 0.0);
                for (int l : res) {
                    if (l == k) continue;
                    const double* u = lu.data() + static_cast<std::size_t>(g.edge(j, l)) * mc;
                    for (int m = 0; m < mc; ++m) v[m] += u[m];
                }
                double vmax = v[0];
                for (int m = 1; m < mc; ++m) vmax = std::max(vmax, v[m]);
                double acc = 0.0;
                for (int m = 0; m < mc; ++m) acc += std::exp(v[m] - vmax);
                const double lse = vmax + std::log(acc);
                for (int m = 0; m < mc; ++m) v[m] -= lse;
            }
        }
    }

    DetectionResult res;
    res.decided.resize(g.num_layers);
    res.scores.assign(g.num_layers, std::vector<double>(mc, 0.0));
    for (int j = 0; j < g.num_layers; ++j) {
        std::vector<double> ls(mc, 0.0);
        for (int k : g.layer_adj[j]) {
            const double* u = lu.data() + static_cast<std::size_t>(g.edge(j, k)) * mc;
            for (int m = 0; m < mc; ++m) ls[m] += u[m];
        }
        double lmax = ls[0];
        for (int m = 1; m < mc; ++m) lmax = std::max(lmax, ls[m]);
        double acc = 0.0;
        auto& s = res.scores[j];
        for (int m = 0; m < mc; ++m) {
            s[m] = std::exp(ls[m] - lmax);
            acc += s[m];
        }
        for (int m = 0; m < mc; ++m) s[m] /= acc;
        res.decided[j] = argmax_lowest(s);
    }
    return res;
}

DetectionResult detect_split_mpa(const ReceivedSignal& y, const Codebook& cb,
                                 const FactorGraph& g, const NoiseModel& noise, int iterations) {
    return detect_split_mpa(y, make_split_basis(cb, g), g, noise, iterations);
}

DetectionResult detect_split_mpa(const ReceivedSignal& y, const SplitBasis& basis,
                                 const FactorGraph& g, const NoiseModel& noise, int iterations) {
    if (iterations < 1)
        throw std::invalid_argument("detect_split_mpa: iterations must be >= 1");
    const SeparableView& view = basis.view;
    std::vector<double> yre(y.size()), yim(y.size());
    for (std::size_t k = 0; k < y.size(); ++k) {
        yre[k] = y[k].real();
        yim[k] = y[k].imag();
    }

    auto run = [&](const EdgeComponents<double>& comps, const std::vector<double>& yy,
                   int mc) {
        MessageSet msgs = init_messages(g, mc);
        for (int it = 0; it < iterations; ++it) {
            resource_update_core<double>(msgs, yy, comps, noise, g);
            update_layer_messages(msgs, g);
        }
        return msgs;
    };
    const MessageSet mre = run(basis.real_comps, yre, view.real_count);
    const MessageSet mim = run(basis.imag_comps, yim, view.imag_count);

    const DetectionResult rre = decide(mre, g);
    const DetectionResult rim = decide(mim, g);

    DetectionResult res;
    res.decided.resize(g.num_layers);
    res.scores.assign(g.num_layers, std::vector<double>(basis.num_codewords, 0.0));
    for (int j = 0; j < g.num_layers; ++j) {
        auto& s = res.scores[j];
        for (int m = 0; m < basis.num_codewords; ++m)
            s[m] = rre.scores[j][view.real_index[j][m]] * rim.scores[j][view.imag_index[j][m]];
        res.decided[j] = argmax_lowest(s);
    }
    res.diag.underflow_replacements =
        mre.underflow_replacements + mim.underflow_replacements;
    return res;
}

}  // namespace scma
