#pragma once

#include <cstddef>

#include "scma/dmpa.hpp"

namespace scma {

/// Inputs to the discretization error bounds. The real-field bounds read
/// sigma2 (per-dimension variance, N0/2 on the split path); the complex
/// ones read n0 directly. No automatic conversion between the two.
struct BoundInputs {
    int resource_degree = 0;  // d_f
    double step = 0.0;        // w
    double n_wid = 0.0;       // nWid
    double sigma2 = 0.0;
    double n0 = 0.0;
};

// Worst-case absolute deviation of the grid-evaluated density from the
// exact mixture, 1-D real field: d_f * w * e^{-1/2} / (2 sigma^2 sqrt(2 pi)).
double abs_error_bound(const BoundInputs& in);

// First-order estimate of the relative deviation, 1-D real field:
// w * d_f * nWid / (2 sigma^2).
double rel_error_bound(const BoundInputs& in);

// Complex-field counterparts: d_f * w / (N0^2 pi) * sqrt(N0/e) and
// sqrt(2) * d_f * w * nWid / (pi^2 N0^3).
double abs_error_bound_complex(const BoundInputs& in);
double rel_error_bound_complex(const BoundInputs& in);

enum class Field { real, complex_field };

// Largest step meeting the requested relative-error target, snapped down so
// nWid is an exact multiple (the amplitude bound is snapped up to the grid
// at construction time, so wid/w needs no adjustment here).
double suggest_w(double target_rel, const BoundInputs& in, Field field);

enum class DetectorPath { mpa, mpa_split, dmpa_1d, dmpa_2d };

/// Per-resource-node operation counts. For the grid paths `operations`
/// combines the transform cost with the per-edge pointwise products and
/// `transform_length` reports the padded length (per dimension).
struct ComplexityEstimate {
    double operations = 0.0;
    std::size_t transform_length = 0;
    int transforms = 0;
};

ComplexityEstimate estimate_complexity(int resource_degree, int num_codewords,
                                       const DiscretizationParams& params, DetectorPath path);

}  // namespace scma
