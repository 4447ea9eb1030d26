#include "scma/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "scma/rng.hpp"

namespace scma {

namespace {

bool power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

int isqrt_exact(int v) {
    int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(v))));
    return r * r == v ? r : -1;
}

}  // namespace

std::vector<int> Codebook::support(int layer) const {
    std::vector<int> out;
    for (int k = 0; k < num_resources; ++k) {
        bool nonzero = false;
        for (int m = 0; m < num_codewords && !nonzero; ++m)
            nonzero = entry(layer, m, k) != cplx{0.0, 0.0};
        if (nonzero) out.push_back(k);
    }
    return out;
}

void Codebook::validate() const {
    if (num_resources <= 0 || num_layers <= 0 || num_codewords <= 0 || num_nonzero <= 0)
        throw std::invalid_argument("codebook: dimensions must be positive");
    if (num_nonzero > num_resources)
        throw std::invalid_argument("codebook: N exceeds K");
    if (num_codewords < 2 || !power_of_two(num_codewords))
        throw std::invalid_argument("codebook: M must be a power of two >= 2");
    const std::size_t expect = static_cast<std::size_t>(num_layers) * num_codewords * num_resources;
    if (entries.size() != expect)
        throw std::invalid_argument("codebook: entry storage does not match K*J*M");
    for (int j = 0; j < num_layers; ++j) {
        const auto sup = support(j);
        if (static_cast<int>(sup.size()) != num_nonzero) {
            std::ostringstream msg;
            msg << "codebook: inconsistent support in layer " << j << ": " << sup.size()
                << " nonzero positions, expected " << num_nonzero;
            throw std::invalid_argument(msg.str());
        }
    }
}

ChannelVectors ChannelVectors::all_ones(int num_layers, int num_resources) {
    ChannelVectors h;
    h.num_layers = num_layers;
    h.num_resources = num_resources;
    h.gains.assign(static_cast<std::size_t>(num_layers) * num_resources, cplx{1.0, 0.0});
    return h;
}

Codebook load_codebook(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("codebook: cannot open " + path);

    auto next_data_line = [&in](std::string& line) -> bool {
        while (std::getline(in, line)) {
            const auto pos = line.find_first_not_of(" \t\r");
            if (pos == std::string::npos || line[pos] == '#') continue;
            return true;
        }
        return false;
    };

    std::string line;
    if (!next_data_line(line)) throw std::runtime_error("codebook: empty file " + path);

    Codebook cb;
    {
        std::istringstream hdr(line);
        if (!(hdr >> cb.num_resources >> cb.num_layers >> cb.num_codewords >> cb.num_nonzero))
            throw std::runtime_error("codebook: bad header line, expected 'K J M N'");
    }
    if (cb.num_resources <= 0 || cb.num_layers <= 0 || cb.num_codewords <= 0)
        throw std::runtime_error("codebook: header dimensions must be positive");

    cb.entries.resize(static_cast<std::size_t>(cb.num_layers) * cb.num_codewords * cb.num_resources);
    for (int j = 0; j < cb.num_layers; ++j) {
        for (int m = 0; m < cb.num_codewords; ++m) {
            if (!next_data_line(line)) {
                std::ostringstream msg;
                msg << "codebook: missing row for layer " << j << " codeword " << m;
                throw std::runtime_error(msg.str());
            }
            std::istringstream row(line);
            for (int k = 0; k < cb.num_resources; ++k) {
                double re = 0.0, im = 0.0;
                if (!(row >> re >> im)) {
                    std::ostringstream msg;
                    msg << "codebook: layer " << j << " codeword " << m << " has fewer than "
                        << 2 * cb.num_resources << " values";
                    throw std::runtime_error(msg.str());
                }
                cb.entry(j, m, k) = cplx{re, im};
            }
            double extra;
            if (row >> extra) {
                std::ostringstream msg;
                msg << "codebook: layer " << j << " codeword " << m << " has extra values";
                throw std::runtime_error(msg.str());
            }
        }
    }
    cb.validate();
    return cb;
}

void save_codebook(const Codebook& cb, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("codebook: cannot write " + path);
    out.precision(17);
    out << cb.num_resources << ' ' << cb.num_layers << ' ' << cb.num_codewords << ' '
        << cb.num_nonzero << '\n';
    for (int j = 0; j < cb.num_layers; ++j)
        for (int m = 0; m < cb.num_codewords; ++m) {
            for (int k = 0; k < cb.num_resources; ++k) {
                if (k) out << ' ';
                out << cb.entry(j, m, k).real() << ' ' << cb.entry(j, m, k).imag();
            }
            out << '\n';
        }
    if (!out) throw std::runtime_error("codebook: write failed for " + path);
}

Codebook generate_separable_codebook(int num_resources, int num_codewords, std::uint64_t seed) {
    if (num_resources < 3)
        throw std::invalid_argument("generate_separable_codebook: K must be >= 3");
    const int side = isqrt_exact(num_codewords);
    if (side < 0 || !power_of_two(num_codewords))
        throw std::invalid_argument(
            "generate_separable_codebook: M must be a perfect square and a power of two");

    Codebook cb;
    cb.num_resources = num_resources;
    cb.num_layers = num_resources * (num_resources - 1) / 2;
    cb.num_codewords = num_codewords;
    cb.num_nonzero = 2;
    cb.entries.assign(
        static_cast<std::size_t>(cb.num_layers) * cb.num_codewords * cb.num_resources, cplx{});

    auto rng = make_substream(seed, 0);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    // Distinct values per constellation dimension; reject draws closer than
    // 0.05 to an already chosen one so points stay distinguishable.
    auto draw_values = [&](int count) {
        std::vector<double> vals;
        while (static_cast<int>(vals.size()) < count) {
            const double v = unit(rng);
            bool ok = true;
            for (double u : vals)
                if (std::abs(u - v) < 0.05) { ok = false; break; }
            if (ok) vals.push_back(v);
        }
        return vals;
    };

    int layer = 0;
    for (int a = 0; a < num_resources; ++a) {
        for (int b = a + 1; b < num_resources; ++b, ++layer) {
            const int pos[2] = {a, b};
            std::vector<std::vector<double>> re(2), im(2);
            for (int p = 0; p < 2; ++p) {
                re[p] = draw_values(side);
                im[p] = draw_values(side);
            }
            for (int r = 0; r < side; ++r)
                for (int q = 0; q < side; ++q) {
                    const int m = r * side + q;
                    for (int p = 0; p < 2; ++p)
                        cb.entry(layer, m, pos[p]) = cplx{re[p][r], im[p][q]};
                }
        }
    }
    cb.validate();
    return cb;
}

Codebook effective_codebook(const Codebook& cb, const ChannelVectors& h) {
    if (h.num_layers != cb.num_layers || h.num_resources != cb.num_resources)
        throw std::invalid_argument("effective_codebook: channel dimensions do not match codebook");
    Codebook out = cb;
    for (int j = 0; j < cb.num_layers; ++j)
        for (int m = 0; m < cb.num_codewords; ++m)
            for (int k = 0; k < cb.num_resources; ++k)
                out.entry(j, m, k) = h.gain(j, k) * cb.entry(j, m, k);
    return out;
}

double amplitude_bound(const Codebook& cb) {
    double bound = 0.0;
    for (const cplx& e : cb.entries)
        bound = std::max({bound, std::abs(e.real()), std::abs(e.imag())});
    return bound;
}

std::optional<SeparableView> try_separate(const Codebook& cb) {
    SeparableView view;
    view.real_index.resize(cb.num_layers);
    view.imag_index.resize(cb.num_layers);
    view.real_parts.resize(cb.num_layers);
    view.imag_parts.resize(cb.num_layers);

    const int K = cb.num_resources;
    for (int j = 0; j < cb.num_layers; ++j) {
        std::vector<std::vector<double>> res(cb.num_codewords, std::vector<double>(K));
        std::vector<std::vector<double>> ims(cb.num_codewords, std::vector<double>(K));
        for (int m = 0; m < cb.num_codewords; ++m)
            for (int k = 0; k < K; ++k) {
                res[m][k] = cb.entry(j, m, k).real();
                ims[m][k] = cb.entry(j, m, k).imag();
            }
        auto distinct_sorted = [](std::vector<std::vector<double>> v) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
            return v;
        };
        const auto re_set = distinct_sorted(res);
        const auto im_set = distinct_sorted(ims);
        const int rc = static_cast<int>(re_set.size());
        const int qc = static_cast<int>(im_set.size());
        if (static_cast<long>(rc) * qc != cb.num_codewords) return std::nullopt;
        if (j == 0) {
            view.real_count = rc;
            view.imag_count = qc;
        } else if (rc != view.real_count || qc != view.imag_count) {
            return std::nullopt;
        }

        auto index_of = [](const std::vector<std::vector<double>>& set,
                           const std::vector<double>& v) {
            const auto it = std::lower_bound(set.begin(), set.end(), v);
            return static_cast<int>(it - set.begin());
        };
        view.real_index[j].resize(cb.num_codewords);
        view.imag_index[j].resize(cb.num_codewords);
        std::vector<char> seen(static_cast<std::size_t>(rc) * qc, 0);
        for (int m = 0; m < cb.num_codewords; ++m) {
            const int r = index_of(re_set, res[m]);
            const int q = index_of(im_set, ims[m]);
            view.real_index[j][m] = r;
            view.imag_index[j][m] = q;
            char& flag = seen[static_cast<std::size_t>(r) * qc + q];
            if (flag) return std::nullopt;  // duplicate (r,q) pair
            flag = 1;
        }
        view.real_parts[j].resize(static_cast<std::size_t>(rc) * K);
        view.imag_parts[j].resize(static_cast<std::size_t>(qc) * K);
        for (int s = 0; s < rc; ++s)
            for (int k = 0; k < K; ++k)
                view.real_parts[j][static_cast<std::size_t>(s) * K + k] = re_set[s][k];
        for (int s = 0; s < qc; ++s)
            for (int k = 0; k < K; ++k)
                view.imag_parts[j][static_cast<std::size_t>(s) * K + k] = im_set[s][k];
    }
    return view;
}

bool is_separable(const Codebook& cb) { return try_separate(cb).has_value(); }

}  // namespace scma
