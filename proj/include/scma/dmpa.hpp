#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "scma/channel.hpp"
#include "scma/codebook.hpp"
#include "scma/factor_graph.hpp"
#include "scma/mpa.hpp"

namespace scma {

/// Uniform-grid parameters for one resource node. Bounds are kept as
/// integer step counts so that wid/w and nWid/w are exact divisions;
/// construction snaps both bounds upward to the next multiple of the step.
struct DiscretizationParams {
    double step = 0.0;       // w
    long wid_steps = 0;      // wid / w
    long n_wid_steps = 0;    // nWid / w
    int resource_degree = 0;  // d_f

    double wid() const { return step * static_cast<double>(wid_steps); }
    double n_wid() const { return step * static_cast<double>(n_wid_steps); }

    static DiscretizationParams make(double step, double wid, double n_wid,
                                     int resource_degree);
};

/// A sampled pdf on a uniform grid: either the impulse masses of a layer
/// message (point_mass) or a sampled density (noise, convolution result).
/// 2-D grids are square with the real axis as the major index.
struct DiscretePdf {
    enum class Kind { point_mass, density };

    Kind kind = Kind::density;
    int dims = 1;
    double origin = 0.0;  // coordinate of index 0, per dimension
    double step = 0.0;
    std::size_t len = 0;  // per dimension
    std::vector<double> values;

    double at(std::size_t i) const { return values[i]; }
    double at(std::size_t ir, std::size_t ii) const { return values[ir * len + ii]; }
};

// Distributes each message mass to the grid point nearest its codeword
// component (grid [-wid, wid], step w; ties round half away from zero).
// Masses landing on the same point accumulate.
DiscretePdf discretize_layer_pdf(std::span<const double> msg,
                                 std::span<const double> components,
                                 const DiscretizationParams& params);
DiscretePdf discretize_layer_pdf(std::span<const double> msg,
                                 std::span<const cplx> components,
                                 const DiscretizationParams& params);

// Samples the noise density on [-nWid, nWid] (1-D: Gaussian with variance
// N0/2; 2-D: circularly symmetric complex density on the square grid).
DiscretePdf sample_noise_pdf(const NoiseModel& noise, const DiscretizationParams& params,
                             int dims);

// Smallest power of two >= 2((d_f-1)wid + nWid)/w + 1.
std::size_t padded_length(const DiscretizationParams& params);

// Zero-pads all pdfs to the transform length, multiplies the spectra
// pointwise and inverse-transforms; the result grid starts at the sum of
// the input origins and negative round-off is clamped to zero. Throws when
// the transform length cannot hold the linear-convolution support.
DiscretePdf convolve_all(const std::vector<DiscretePdf>& layer_pdfs,
                         const DiscretePdf& noise_pdf, std::size_t transform_len);

// Nearest-sample lookup; coordinates past the grid yield zero density and
// bump the off-grid diagnostic.
double evaluate_g(const DiscretePdf& g, double t0, DetectionDiagnostics* diag = nullptr);
double evaluate_g(const DiscretePdf& g, cplx t0, DetectionDiagnostics* diag = nullptr);

/// per_node computes each connected layer's spectrum once per resource node
/// and reuses it for every edge; per_edge recomputes them per edge. Both
/// orders produce bit-identical messages.
enum class SpectrumReuse { per_node, per_edge };

enum class DmpaMode { automatic, split_1d, complex_2d };

// Resource-node update of Algorithm-1's schedule computed through the grid
// pipeline: discretize the connected layers' pdfs, convolve with the noise
// pdf via FFT, and read each U entry off the resulting grid at y_k - x_kjm.
// The amplitude bound (and with it the grid extent) is taken per resource
// from the supplied components.
void update_resource_messages_dmpa(MessageSet& msgs, const std::vector<double>& y,
                                   const EdgeComponents<double>& comps,
                                   const NoiseModel& noise, const FactorGraph& g, double step,
                                   DetectionDiagnostics* diag = nullptr,
                                   SpectrumReuse reuse = SpectrumReuse::per_node);
void update_resource_messages_dmpa(MessageSet& msgs, const ReceivedSignal& y,
                                   const EdgeComponents<cplx>& comps, const NoiseModel& noise,
                                   const FactorGraph& g, double step,
                                   DetectionDiagnostics* diag = nullptr,
                                   SpectrumReuse reuse = SpectrumReuse::per_node);
void update_resource_messages_dmpa(MessageSet& msgs, const ReceivedSignal& y,
                                   const Codebook& cb, const NoiseModel& noise,
                                   const FactorGraph& g, double step,
                                   DetectionDiagnostics* diag = nullptr,
                                   SpectrumReuse reuse = SpectrumReuse::per_node);

/// Input-independent detector state for one codebook with the path choice
/// already resolved: the split basis for the 1-D route or the complex
/// component tables for the 2-D route.
struct DmpaBasis {
    bool split = false;
    int num_codewords = 0;
    SplitBasis split_basis;            // split route
    EdgeComponents<cplx> complex_comps;  // 2-D route
};

// Throws when split_1d is requested for a non-separable codebook.
DmpaBasis make_dmpa_basis(const Codebook& cb, const FactorGraph& g,
                          DmpaMode mode = DmpaMode::automatic);

// Same control flow as detect_mpa with the resource update swapped for the
// grid pipeline. automatic picks split_1d when the codebook separates,
// complex_2d otherwise; requesting split_1d on a non-separable codebook is
// an error.
DetectionResult detect_dmpa(const ReceivedSignal& y, const Codebook& cb, const FactorGraph& g,
                            const NoiseModel& noise, int iterations, double step,
                            DmpaMode mode = DmpaMode::automatic);
DetectionResult detect_dmpa(const ReceivedSignal& y, const DmpaBasis& basis,
                            const FactorGraph& g, const NoiseModel& noise, int iterations,
                            double step);

}  // namespace scma
