#pragma once

#include <vector>

#include "scma/channel.hpp"
#include "scma/codebook.hpp"
#include "scma/factor_graph.hpp"

namespace scma {

/// Edge messages of one detection instance, stored flat per edge id.
/// V (layer -> resource) are probability vectors after normalization;
/// U (resource -> layer) are nonnegative likelihood scores.
struct MessageSet {
    int num_codewords = 0;
    std::vector<double> v;
    std::vector<double> u;
    long underflow_replacements = 0;

    double* v_at(int edge) { return v.data() + static_cast<std::size_t>(edge) * num_codewords; }
    const double* v_at(int edge) const {
        return v.data() + static_cast<std::size_t>(edge) * num_codewords;
    }
    double* u_at(int edge) { return u.data() + static_cast<std::size_t>(edge) * num_codewords; }
    const double* u_at(int edge) const {
        return u.data() + static_cast<std::size_t>(edge) * num_codewords;
    }
};

// Every V entry 1/M, U zeroed.
MessageSet init_messages(const FactorGraph& g, int num_codewords);

struct DetectionDiagnostics {
    long underflow_replacements = 0;  // all-zero V vectors replaced by uniform
    long off_grid_evaluations = 0;    // grid lookups past the modeled support
};

struct DetectionResult {
    std::vector<int> decided;                 // per-layer codeword index, argmax of scores
    std::vector<std::vector<double>> scores;  // per-layer final beliefs
    DetectionDiagnostics diag;
};

/// Per-edge codeword components at the edge's resource; the field type is
/// double for the real-split instances and cplx for the full detector.
template <typename T>
struct EdgeComponents {
    int num_codewords = 0;
    std::vector<T> values;  // [edge * M + m]

    const T* at(int edge) const {
        return values.data() + static_cast<std::size_t>(edge) * num_codewords;
    }
    T* at(int edge) { return values.data() + static_cast<std::size_t>(edge) * num_codewords; }
};

EdgeComponents<cplx> make_edge_components(const Codebook& cb, const FactorGraph& g);
EdgeComponents<double> make_real_components(const SeparableView& view, const FactorGraph& g);
EdgeComponents<double> make_imag_components(const SeparableView& view, const FactorGraph& g);

/// Input-independent state of the split detectors for one codebook: the
/// separable view plus both per-dimension component tables. Preparing it
/// once and reusing it across detections keeps the per-detection cost free
/// of codebook preprocessing.
struct SplitBasis {
    int num_codewords = 0;  // M of the source codebook
    SeparableView view;
    EdgeComponents<double> real_comps;
    EdgeComponents<double> imag_comps;
};

// Throws std::invalid_argument when the codebook is not separable.
SplitBasis make_split_basis(const Codebook& cb, const FactorGraph& g);

// Exhaustive resource-node update: for each edge (k,j) and codeword m,
//   U = sum over combinations c of the other connected layers of
//       density(y_k - x_kjm - sum_i c_i) * prod_i V_i(c_i),
// with the complex density exp(-|d|^2/N0)/(pi N0), or its per-dimension
// Gaussian counterpart (variance N0/2) for the real-field instances.
// Combinations are walked with an in-place odometer in adjacency order.
void update_resource_messages(MessageSet& msgs, const std::vector<double>& y,
                              const EdgeComponents<double>& comps, const NoiseModel& noise,
                              const FactorGraph& g);
void update_resource_messages(MessageSet& msgs, const ReceivedSignal& y,
                              const EdgeComponents<cplx>& comps, const NoiseModel& noise,
                              const FactorGraph& g);
void update_resource_messages(MessageSet& msgs, const ReceivedSignal& y, const Codebook& cb,
                              const NoiseModel& noise, const FactorGraph& g);

// V update (product of the other resources' U) followed by normalization.
// A vector whose sum underflows is replaced by uniform and counted.
void update_layer_messages(MessageSet& msgs, const FactorGraph& g);

// Final beliefs (product over all connected resources) and per-layer argmax;
// ties go to the lowest index.
DetectionResult decide(const MessageSet& msgs, const FactorGraph& g);

DetectionResult detect_mpa(const ReceivedSignal& y, const Codebook& cb, const FactorGraph& g,
                           const NoiseModel& noise, int iterations);
DetectionResult detect_mpa(const ReceivedSignal& y, const EdgeComponents<cplx>& comps,
                           const FactorGraph& g, const NoiseModel& noise, int iterations);

// Same schedule computed entirely in the log domain with exact
// log-sum-exp; immune to the underflow that hits the linear path at very
// small N0.
DetectionResult detect_llr_mpa(const ReceivedSignal& y, const Codebook& cb, const FactorGraph& g,
                               const NoiseModel& noise, int iterations);
DetectionResult detect_llr_mpa(const ReceivedSignal& y, const EdgeComponents<cplx>& comps,
                               const FactorGraph& g, const NoiseModel& noise, int iterations);

// Detects real and imaginary parts independently (requires a separable
// effective codebook) and recombines the per-dimension beliefs.
DetectionResult detect_split_mpa(const ReceivedSignal& y, const Codebook& cb,
                                 const FactorGraph& g, const NoiseModel& noise, int iterations);
DetectionResult detect_split_mpa(const ReceivedSignal& y, const SplitBasis& basis,
                                 const FactorGraph& g, const NoiseModel& noise, int iterations);

}  // namespace scma
