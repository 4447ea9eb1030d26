#include "scma/dmpa.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "scma/spectral.hpp"

namespace scma {

namespace {

long snap_up(double bound, double step) {
    if (bound <= 0.0) return 0;
    return static_cast<long>(std::ceil(bound / step - 1e-9));
}

long grid_index(double t, double origin, double step) {
    return std::llround((t - origin) / step);  // llround: half away from zero
}

double gaussian_1d(double t, double sigma2) {
    return std::exp(-t * t / (2.0 * sigma2)) / std::sqrt(2.0 * std::numbers::pi * sigma2);
}

// ---- 1-D fast path -------------------------------------------------------

// Half spectra (rfft layout) of the zero-padded noise pdf, one per distinct
// transform length. Immutable once inserted.
struct NoiseSpectra1D {
    std::map<std::size_t, std::pair<std::vector<double>, std::vector<double>>> by_len;

    const std::pair<std::vector<double>, std::vector<double>>& get(
        std::size_t n, const NoiseModel& noise, const DiscretizationParams& params) {
        auto it = by_len.find(n);
        if (it != by_len.end()) return it->second;
        const DiscretePdf eta = sample_noise_pdf(noise, params, 1);
        std::vector<double> padded(n, 0.0);
        std::copy(eta.values.begin(), eta.values.end(), padded.begin());
        std::pair<std::vector<double>, std::vector<double>> spectrum;
        spectrum.first.resize(n / 2 + 1);
        spectrum.second.resize(n / 2 + 1);
        spectral::rfft(padded.data(), n, spectrum.first.data(), spectrum.second.data());
        return by_len.emplace(n, std::move(spectrum)).first->second;
    }
};

struct Workspace1D {
    std::vector<double> padded;      // scatter + transform input
    std::vector<double> sr, si;      // layer spectra, df * half
    std::vector<double> gr, gi, gv;  // per-edge product spectrum and grid
    NoiseSpectra1D noise_spectra;
};

void scatter_layer_pdf(const double* msg, const double* comps, int mc,
                       const DiscretizationParams& params, double* padded, std::size_t n) {
    std::fill(padded, padded + n, 0.0);
    const double origin = -params.wid();
    const long len = 2 * params.wid_steps + 1;
    for (int m = 0; m < mc; ++m) {
        const long idx = grid_index(comps[m], origin, params.step);
        if (idx < 0 || idx >= len)
            throw std::invalid_argument(
                "discretize: codeword component outside [-wid, wid]");
        padded[idx] += msg[m];
    }
}

void dmpa_update_1d(MessageSet& msgs, const std::vector<double>& y,
                    const EdgeComponents<double>& comps, const NoiseModel& noise,
                    const FactorGraph& g, double step, Workspace1D& ws,
                    DetectionDiagnostics* diag, SpectrumReuse reuse) {
    const int mc = msgs.num_codewords;
    for (int k = 0; k < g.num_resources; ++k) {
        const auto& nbrs = g.resource_adj[k];
        const int df = static_cast<int>(nbrs.size());

        double wid = 0.0;
        for (int a = 0; a < df; ++a) {
            const double* xs = comps.at(g.edge(nbrs[a], k));
            for (int m = 0; m < mc; ++m) wid = std::max(wid, std::abs(xs[m]));
        }
        const auto params = DiscretizationParams::make(step, wid, noise.n_wid, df);
        const std::size_t n = padded_length(params);
        const std::size_t half = n / 2 + 1;
        const long support =
            2 * ((df - 1) * params.wid_steps + params.n_wid_steps) + 1;
        const double g_origin = -(static_cast<double>(df - 1) * params.wid() + params.n_wid());

        ws.padded.resize(n);
        ws.sr.resize(static_cast<std::size_t>(df) * half);
        ws.si.resize(static_cast<std::size_t>(df) * half);
        ws.gr.resize(half);
        ws.gi.resize(half);
        ws.gv.resize(n);

        if (reuse == SpectrumReuse::per_node) {
            for (int a = 0; a < df; ++a) {
                const int e = g.edge(nbrs[a], k);
                scatter_layer_pdf(msgs.v_at(e), comps.at(e), mc, params, ws.padded.data(), n);
                spectral::rfft(ws.padded.data(), n, ws.sr.data() + a * half,
                               ws.si.data() + a * half);
            }
        }
        const auto& eta = ws.noise_spectra.get(n, noise, params);

        for (int a = 0; a < df; ++a) {
            const int e = g.edge(nbrs[a], k);
            std::copy(eta.first.begin(), eta.first.end(), ws.gr.begin());
            std::copy(eta.second.begin(), eta.second.end(), ws.gi.begin());
            for (int b = 0; b < df; ++b) {
                if (b == a) continue;
                const double* br;
                const double* bi;
                if (reuse == SpectrumReuse::per_node) {
                    br = ws.sr.data() + b * half;
                    bi = ws.si.data() + b * half;
                } else {
                    const int oe = g.edge(nbrs[b], k);
                    scatter_layer_pdf(msgs.v_at(oe), comps.at(oe), mc, params,
                                      ws.padded.data(), n);
                    spectral::rfft(ws.padded.data(), n, ws.sr.data(), ws.si.data());
                    br = ws.sr.data();
                    bi = ws.si.data();
                }
                for (std::size_t i = 0; i < half; ++i) {
                    const double r = ws.gr[i] * br[i] - ws.gi[i] * bi[i];
                    const double m = ws.gr[i] * bi[i] + ws.gi[i] * br[i];
                    ws.gr[i] = r;
                    ws.gi[i] = m;
                }
            }
            spectral::irfft(ws.gr.data(), ws.gi.data(), n, ws.gv.data());

            const double* xs = comps.at(e);
            double* out = msgs.u_at(e);
            for (int m = 0; m < mc; ++m) {
                const long idx = grid_index(y[k] - xs[m], g_origin, step);
                if (idx < 0 || idx >= support) {
                    out[m] = 0.0;
                    if (diag) ++diag->off_grid_evaluations;
                } else {
                    out[m] = std::max(ws.gv[idx], 0.0);
                }
            }
        }
    }
}

// ---- 2-D path ------------------------------------------------------------

struct NoiseSpectra2D {
    std::map<std::size_t, std::pair<std::vector<double>, std::vector<double>>> by_len;

    const std::pair<std::vector<double>, std::vector<double>>& get(
        std::size_t n, const NoiseModel& noise, const DiscretizationParams& params) {
        auto it = by_len.find(n);
        if (it != by_len.end()) return it->second;
        const DiscretePdf eta = sample_noise_pdf(noise, params, 2);
        std::pair<std::vector<double>, std::vector<double>> spectrum;
        spectrum.first.assign(n * n, 0.0);
        spectrum.second.assign(n * n, 0.0);
        for (std::size_t r = 0; r < eta.len; ++r)
            std::copy(eta.values.begin() + r * eta.len, eta.values.begin() + (r + 1) * eta.len,
                      spectrum.first.begin() + r * n);
        fft_2d(spectrum.first.data(), spectrum.second.data(), n);
        return by_len.emplace(n, std::move(spectrum)).first->second;
    }

    static void fft_2d(double* re, double* im, std::size_t side) {
        for (std::size_t r = 0; r < side; ++r)
            spectral::fft(re + r * side, im + r * side, side);
        std::vector<double> cr(side), ci(side);
        for (std::size_t c = 0; c < side; ++c) {
            for (std::size_t r = 0; r < side; ++r) {
                cr[r] = re[r * side + c];
                ci[r] = im[r * side + c];
            }
            spectral::fft(cr.data(), ci.data(), side);
            for (std::size_t r = 0; r < side; ++r) {
                re[r * side + c] = cr[r];
                im[r * side + c] = ci[r];
            }
        }
    }

    static void ifft_2d(double* re, double* im, std::size_t side) {
        fft_2d(im, re, side);  // conjugate trick
        const double inv = 1.0 / static_cast<double>(side * side);
        for (std::size_t i = 0; i < side * side; ++i) {
            re[i] *= inv;
            im[i] *= inv;
        }
    }
};

struct Workspace2D {
    std::vector<double> sr, si;  // layer spectra, df * n * n
    std::vector<double> gr, gi;  // per-edge product
    NoiseSpectra2D noise_spectra;
};

void scatter_layer_pdf_2d(const double* msg, const cplx* comps, int mc,
                          const DiscretizationParams& params, double* grid, std::size_t n) {
    std::fill(grid, grid + n * n, 0.0);
    const double origin = -params.wid();
    const long len = 2 * params.wid_steps + 1;
    for (int m = 0; m < mc; ++m) {
        const long ir = grid_index(comps[m].real(), origin, params.step);
        const long ii = grid_index(comps[m].imag(), origin, params.step);
        if (ir < 0 || ir >= len || ii < 0 || ii >= len)
            throw std::invalid_argument(
                "discretize: codeword component outside [-wid, wid]");
        grid[static_cast<std::size_t>(ir) * n + ii] += msg[m];
    }
}

void dmpa_update_2d(MessageSet& msgs, const ReceivedSignal& y,
                    const EdgeComponents<cplx>& comps, const NoiseModel& noise,
                    const FactorGraph& g, double step, Workspace2D& ws,
                    DetectionDiagnostics* diag, SpectrumReuse reuse) {
    const int mc = msgs.num_codewords;
    for (int k = 0; k < g.num_resources; ++k) {
        const auto& nbrs = g.resource_adj[k];
        const int df = static_cast<int>(nbrs.size());

        double wid = 0.0;
        for (int a = 0; a < df; ++a) {
            const cplx* xs = comps.at(g.edge(nbrs[a], k));
            for (int m = 0; m < mc; ++m)
                wid = std::max({wid, std::abs(xs[m].real()), std::abs(xs[m].imag())});
        }
        const auto params = DiscretizationParams::make(step, wid, noise.n_wid, df);
        const std::size_t n = padded_length(params);
        const std::size_t cells = n * n;
        const long support =
            2 * ((df - 1) * params.wid_steps + params.n_wid_steps) + 1;
        const double g_origin = -(static_cast<double>(df - 1) * params.wid() + params.n_wid());

        ws.sr.resize(static_cast<std::size_t>(df) * cells);
        ws.si.resize(static_cast<std::size_t>(df) * cells);
        ws.gr.resize(cells);
        ws.gi.resize(cells);

        if (reuse == SpectrumReuse::per_node) {
            for (int a = 0; a < df; ++a) {
                const int e = g.edge(nbrs[a], k);
                double* re = ws.sr.data() + static_cast<std::size_t>(a) * cells;
                double* im = ws.si.data() + static_cast<std::size_t>(a) * cells;
                scatter_layer_pdf_2d(msgs.v_at(e), comps.at(e), mc, params, re, n);
                std::fill(im, im + cells, 0.0);
                NoiseSpectra2D::fft_2d(re, im, n);
            }
        }
        const auto& eta = ws.noise_spectra.get(n, noise, params);

        for (int a = 0; a < df; ++a) {
            const int e = g.edge(nbrs[a], k);
            std::copy(eta.first.begin(), eta.first.end(), ws.gr.begin());
            std::copy(eta.second.begin(), eta.second.end(), ws.gi.begin());
            for (int b = 0; b < df; ++b) {
                if (b == a) continue;
                const double* br;
                const double* bi;
                if (reuse == SpectrumReuse::per_node) {
                    br = ws.sr.data() + static_cast<std::size_t>(b) * cells;
                    bi = ws.si.data() + static_cast<std::size_t>(b) * cells;
                } else {
                    const int oe = g.edge(nbrs[b], k);
                    double* re = ws.sr.data();
                    double* im = ws.si.data();
                    scatter_layer_pdf_2d(msgs.v_at(oe), comps.at(oe), mc, params, re, n);
                    std::fill(im, im + cells, 0.0);
                    NoiseSpectra2D::fft_2d(re, im, n);
                    br = re;
                    bi = im;
                }
                for (std::size_t i = 0; i < cells; ++i) {
                    const double r = ws.gr[i] * br[i] - ws.gi[i] * bi[i];
                    const double m = ws.gr[i] * bi[i] + ws.gi[i] * br[i];
                    ws.gr[i] = r;
                    ws.gi[i] = m;
                }
            }
            NoiseSpectra2D::ifft_2d(ws.gr.data(), ws.gi.data(), n);

            const cplx* xs = comps.at(e);
            double* out = msgs.u_at(e);
            for (int m = 0; m < mc; ++m) {
                const cplx t0 = y[k] - xs[m];
                const long ir = grid_index(t0.real(), g_origin, step);
                const long ii = grid_index(t0.imag(), g_origin, step);
                if (ir < 0 || ir >= support || ii < 0 || ii >= support) {
                    out[m] = 0.0;
                    if (diag) ++diag->off_grid_evaluations;
                } else {
                    out[m] = std::max(ws.gr[static_cast<std::size_t>(ir) * n + ii], 0.0);
                }
            }
        }
    }
}

}  // namespace

DiscretizationParams DiscretizationParams::make(double step, double wid, double n_wid,
                                                int resource_degree) {
    if (!(step > 0.0))
        throw std::invalid_argument("discretization: step must be positive");
    if (!(n_wid > 0.0))
        throw std::invalid_argument("discretization: nWid must be positive");
    if (wid < 0.0) throw std::invalid_argument("discretization: wid must be nonnegative");
    if (resource_degree < 1)
        throw std::invalid_argument("discretization: resource degree must be >= 1");
    DiscretizationParams p;
    p.step = step;
    p.wid_steps = snap_up(wid, step);
    p.n_wid_steps = std::max<long>(1, snap_up(n_wid, step));
    p.resource_degree = resource_degree;
    return p;
}

DiscretePdf discretize_layer_pdf(std::span<const double> msg,
                                 std::span<const double> components,
                                 const DiscretizationParams& params) {
    if (msg.size() != components.size())
        throw std::invalid_argument("discretize: message/component size mismatch");
    DiscretePdf pdf;
    pdf.kind = DiscretePdf::Kind::point_mass;
    pdf.dims = 1;
    pdf.step = params.step;
    pdf.origin = -params.wid();
    pdf.len = static_cast<std::size_t>(2 * params.wid_steps + 1);
    pdf.values.assign(pdf.len, 0.0);
    for (std::size_t m = 0; m < msg.size(); ++m) {
        const long idx = grid_index(components[m], pdf.origin, params.step);
        if (idx < 0 || idx >= static_cast<long>(pdf.len))
            throw std::invalid_argument("discretize: codeword component outside [-wid, wid]");
        pdf.values[idx] += msg[m];
    }
    return pdf;
}

DiscretePdf discretize_layer_pdf(std::span<const double> msg,
                                 std::span<const cplx> components,
                                 const DiscretizationParams& params) {
    if (msg.size() != components.size())
        throw std::invalid_argument("discretize: message/component size mismatch");
    DiscretePdf pdf;
    pdf.kind = DiscretePdf::Kind::point_mass;
    pdf.dims = 2;
    pdf.step = params.step;
    pdf.origin = -params.wid();
    pdf.len = static_cast<std::size_t>(2 * params.wid_steps + 1);
    pdf.values.assign(pdf.len * pdf.len, 0.0);
    for (std::size_t m = 0; m < msg.size(); ++m) {
        const long ir = grid_index(components[m].real(), pdf.origin, params.step);
        const long ii = grid_index(components[m].imag(), pdf.origin, params.step);
        if (ir < 0 || ir >= static_cast<long>(pdf.len) || ii < 0 ||
            ii >= static_cast<long>(pdf.len))
            throw std::invalid_argument("discretize: codeword component outside [-wid, wid]");
        pdf.values[static_cast<std::size_t>(ir) * pdf.len + ii] += msg[m];
    }
    return pdf;
}

DiscretePdf sample_noise_pdf(const NoiseModel& noise, const DiscretizationParams& params,
                             int dims) {
    if (dims != 1 && dims != 2)
        throw std::invalid_argument("sample_noise_pdf: dims must be 1 or 2");
    DiscretePdf pdf;
    pdf.kind = DiscretePdf::Kind::density;
    pdf.dims = dims;
    pdf.step = params.step;
    pdf.origin = -params.n_wid();
    pdf.len = static_cast<std::size_t>(2 * params.n_wid_steps + 1);
    // coordinates taken relative to the center so eta[i] == eta[len-1-i]
    // holds exactly
    if (dims == 1) {
        pdf.values.resize(pdf.len);
        const double sigma2 = noise.sigma2();
        for (std::size_t i = 0; i < pdf.len; ++i) {
            const double t =
                static_cast<double>(static_cast<long>(i) - params.n_wid_steps) * params.step;
            pdf.values[i] = gaussian_1d(t, sigma2);
        }
    } else {
        pdf.values.resize(pdf.len * pdf.len);
        const double inv_n0 = 1.0 / noise.n0;
        const double prefactor = 1.0 / (std::numbers::pi * noise.n0);
        for (std::size_t ir = 0; ir < pdf.len; ++ir) {
            const double x =
                static_cast<double>(static_cast<long>(ir) - params.n_wid_steps) * params.step;
            for (std::size_t ii = 0; ii < pdf.len; ++ii) {
                const double yv =
                    static_cast<double>(static_cast<long>(ii) - params.n_wid_steps) *
                    params.step;
                pdf.values[ir * pdf.len + ii] = prefactor * std::exp(-(x * x + yv * yv) * inv_n0);
            }
        }
    }
    return pdf;
}

std::size_t padded_length(const DiscretizationParams& params) {
    const long support = 2 * ((params.resource_degree - 1) * params.wid_steps +
                              params.n_wid_steps) + 1;
    return spectral::next_power_of_two(static_cast<std::size_t>(support));
}

DiscretePdf convolve_all(const std::vector<DiscretePdf>& layer_pdfs,
                         const DiscretePdf& noise_pdf, std::size_t transform_len) {
    const int dims = noise_pdf.dims;
    std::size_t support = noise_pdf.len;
    double origin = noise_pdf.origin;
    for (const auto& f : layer_pdfs) {
        if (f.dims != dims || f.step != noise_pdf.step)
            throw std::invalid_argument("convolve_all: pdfs must share grid step and dims");
        support += f.len - 1;
        origin += f.origin;
    }
    if (support > transform_len)
        throw std::invalid_argument(
            "convolve_all: transform length too small for the convolution support");
    if (!spectral::is_power_of_two(transform_len))
        throw std::invalid_argument("convolve_all: transform length must be a power of two");

    DiscretePdf out;
    out.kind = DiscretePdf::Kind::density;
    out.dims = dims;
    out.step = noise_pdf.step;
    out.origin = origin;
    out.len = support;

    if (dims == 1) {
        const std::size_t n = transform_len;
        const std::size_t half = n / 2 + 1;
        std::vector<double> padded(n, 0.0), accr(half), acci(half), sr(half), si(half);
        std::copy(noise_pdf.values.begin(), noise_pdf.values.end(), padded.begin());
        spectral::rfft(padded.data(), n, accr.data(), acci.data());
        for (const auto& f : layer_pdfs) {
            std::fill(padded.begin(), padded.end(), 0.0);
            std::copy(f.values.begin(), f.values.end(), padded.begin());
            spectral::rfft(padded.data(), n, sr.data(), si.data());
            for (std::size_t i = 0; i < half; ++i) {
                const double r = accr[i] * sr[i] - acci[i] * si[i];
                const double m = accr[i] * si[i] + acci[i] * sr[i];
                accr[i] = r;
                acci[i] = m;
            }
        }
        std::vector<double> full(n);
        spectral::irfft(accr.data(), acci.data(), n, full.data());
        out.values.assign(full.begin(), full.begin() + support);
    } else {
        const std::size_t n = transform_len;
        const std::size_t cells = n * n;
        std::vector<double> accr(cells, 0.0), acci(cells, 0.0);
        for (std::size_t r = 0; r < noise_pdf.len; ++r)
            std::copy(noise_pdf.values.begin() + r * noise_pdf.len,
                      noise_pdf.values.begin() + (r + 1) * noise_pdf.len,
                      accr.begin() + r * n);
        NoiseSpectra2D::fft_2d(accr.data(), acci.data(), n);
        std::vector<double> sr(cells), si(cells);
        for (const auto& f : layer_pdfs) {
            std::fill(sr.begin(), sr.end(), 0.0);
            std::fill(si.begin(), si.end(), 0.0);
            for (std::size_t r = 0; r < f.len; ++r)
                std::copy(f.values.begin() + r * f.len, f.values.begin() + (r + 1) * f.len,
                          sr.begin() + r * n);
            NoiseSpectra2D::fft_2d(sr.data(), si.data(), n);
            for (std::size_t i = 0; i < cells; ++i) {
                const double rr = accr[i] * sr[i] - acci[i] * si[i];
                const double mm = accr[i] * si[i] + acci[i] * sr[i];
                accr[i] = rr;
                acci[i] = mm;
            }
        }
        NoiseSpectra2D::ifft_2d(accr.data(), acci.data(), n);
        out.values.resize(support * support);
        for (std::size_t r = 0; r < support; ++r)
            std::copy(accr.begin() + r * n, accr.begin() + r * n + support,
                      out.values.begin() + r * support);
    }
    for (double& v : out.values) v = std::max(v, 0.0);
    return out;
}

double evaluate_g(const DiscretePdf& g, double t0, DetectionDiagnostics* diag) {
    const long idx = grid_index(t0, g.origin, g.step);
    if (idx < 0 || idx >= static_cast<long>(g.len)) {
        if (diag) ++diag->off_grid_evaluations;
        return 0.0;
    }
    return g.values[idx];
}

double evaluate_g(const DiscretePdf& g, cplx t0, DetectionDiagnostics* diag) {
    const long ir = grid_index(t0.real(), g.origin, g.step);
    const long ii = grid_index(t0.imag(), g.origin, g.step);
    if (ir < 0 || ir >= static_cast<long>(g.len) || ii < 0 || ii >= static_cast<long>(g.len)) {
        if (diag) ++diag->off_grid_evaluations;
        return 0.0;
    }
    return g.values[static_cast<std::size_t>(ir) * g.len + ii];
}

void update_resource_messages_dmpa(MessageSet& msgs, const std::vector<double>& y,
                                   const EdgeComponents<double>& comps,
                                   const NoiseModel& noise, const FactorGraph& g, double step,
                                   DetectionDiagnostics* diag, SpectrumReuse reuse) {
    Workspace1D ws;
    dmpa_update_1d(msgs, y, comps, noise, g, step, ws, diag, reuse);
}

void update_resource_messages_dmpa(MessageSet& msgs, const ReceivedSignal& y,
                                   const EdgeComponents<cplx>& comps, const NoiseModel& noise,
                                   const FactorGraph& g, double step,
                                   DetectionDiagnostics* diag, SpectrumReuse reuse) {
    Workspace2D ws;
    dmpa_update_2d(msgs, y, comps, noise, g, step, ws, diag, reuse);
}

void update_resource_messages_dmpa(MessageSet& msgs, const ReceivedSignal& y,
                                   const Codebook& cb, const NoiseModel& noise,
                                   const FactorGraph& g, double step,
                                   DetectionDiagnostics* diag, SpectrumReuse reuse) {
    const auto comps = make_edge_components(cb, g);
    Workspace2D ws;
    dmpa_update_2d(msgs, y, comps, noise, g, step, ws, diag, reuse);
}

DmpaBasis make_dmpa_basis(const Codebook& cb, const FactorGraph& g, DmpaMode mode) {
    DmpaBasis basis;
    basis.num_codewords = cb.num_codewords;
    const bool separable = is_separable(cb);
    if (mode == DmpaMode::split_1d && !separable)
        throw std::invalid_argument("detect_dmpa: split-1D requires a separable codebook");
    basis.split =
        mode == DmpaMode::split_1d || (mode == DmpaMode::automatic && separable);
    if (basis.split)
        basis.split_basis = make_split_basis(cb, g);
    else
        basis.complex_comps = make_edge_components(cb, g);
    return basis;
}

DetectionResult detect_dmpa(const ReceivedSignal& y, const Codebook& cb, const FactorGraph& g,
                            const NoiseModel& noise, int iterations, double step,
                            DmpaMode mode) {
    return detect_dmpa(y, make_dmpa_basis(cb, g, mode), g, noise, iterations, step);
}

DetectionResult detect_dmpa(const ReceivedSignal& y, const DmpaBasis& basis,
                            const FactorGraph& g, const NoiseModel& noise, int iterations,
                            double step) {
    if (iterations < 1) throw std::invalid_argument("detect_dmpa: iterations must be >= 1");
    noise.validate();

    DetectionResult res;
    if (basis.split) {
        const SeparableView& view = basis.split_basis.view;
        std::vector<double> yre(y.size()), yim(y.size());
        for (std::size_t k = 0; k < y.size(); ++k) {
            yre[k] = y[k].real();
            yim[k] = y[k].imag();
        }
        DetectionDiagnostics diag;
        auto run = [&](const EdgeComponents<double>& comps, const std::vector<double>& yy,
                       int mc) {
            MessageSet msgs = init_messages(g, mc);
            Workspace1D ws;
            for (int it = 0; it < iterations; ++it) {
                dmpa_update_1d(msgs, yy, comps, noise, g, step, ws, &diag,
                               SpectrumReuse::per_node);
                update_layer_messages(msgs, g);
            }
            return msgs;
        };
        const MessageSet mre = run(basis.split_basis.real_comps, yre, view.real_count);
        const MessageSet mim = run(basis.split_basis.imag_comps, yim, view.imag_count);
        const DetectionResult rre = decide(mre, g);
        const DetectionResult rim = decide(mim, g);

        res.decided.resize(g.num_layers);
        res.scores.assign(g.num_layers, std::vector<double>(basis.num_codewords, 0.0));
        for (int j = 0; j < g.num_layers; ++j) {
            auto& s = res.scores[j];
            for (int m = 0; m < basis.num_codewords; ++m)
                s[m] = rre.scores[j][view.real_index[j][m]] *
                       rim.scores[j][view.imag_index[j][m]];
            int best = 0;
            for (int m = 1; m < basis.num_codewords; ++m)
                if (s[m] > s[best]) best = m;
            res.decided[j] = best;
        }
        res.diag = diag;
        res.diag.underflow_replacements =
            mre.underflow_replacements + mim.underflow_replacements;
    } else {
        MessageSet msgs = init_messages(g, basis.num_codewords);
        Workspace2D ws;
        DetectionDiagnostics diag;
        for (int it = 0; it < iterations; ++it) {
            dmpa_update_2d(msgs, y, basis.complex_comps, noise, g, step, ws, &diag,
                           SpectrumReuse::per_node);
            update_layer_messages(msgs, g);
        }
        res = decide(msgs, g);
        res.diag.off_grid_evaluations = diag.off_grid_evaluations;
    }
    return res;
}

}  // namespace scma
