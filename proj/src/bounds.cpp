#include "scma/bounds.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace scma {

namespace {

void require_positive(const BoundInputs& in, bool complex_field) {
    if (in.resource_degree < 1 || !(in.step > 0.0) || !(in.n_wid > 0.0))
        throw std::invalid_argument("bounds: d_f, w and nWid must be positive");
    if (complex_field) {
        if (!(in.n0 > 0.0)) throw std::invalid_argument("bounds: N0 must be positive");
    } else {
        if (!(in.sigma2 > 0.0)) throw std::invalid_argument("bounds: sigma^2 must be positive");
    }
}

}  // namespace

double abs_error_bound(const BoundInputs& in) {
    require_positive(in, false);
    return in.resource_degree * in.step * std::exp(-0.5) /
           (2.0 * in.sigma2 * std::sqrt(2.0 * std::numbers::pi));
}

double rel_error_bound(const BoundInputs& in) {
    require_positive(in, false);
    return in.step * in.resource_degree * in.n_wid / (2.0 * in.sigma2);
}

double abs_error_bound_complex(const BoundInputs& in) {
    require_positive(in, true);
    return in.resource_degree * in.step / (in.n0 * in.n0 * std::numbers::pi) *
           std::sqrt(in.n0 / std::numbers::e);
}

double rel_error_bound_complex(const BoundInputs& in) {
    require_positive(in, true);
    return std::numbers::sqrt2 * in.resource_degree * in.step * in.n_wid /
           (std::numbers::pi * std::numbers::pi * in.n0 * in.n0 * in.n0);
}

double suggest_w(double target_rel, const BoundInputs& in, Field field) {
    if (!(target_rel > 0.0))
        throw std::invalid_argument("suggest_w: target must be positive");
    require_positive(in, field == Field::complex_field);
    double w;
    if (field == Field::real) {
        w = 2.0 * in.sigma2 * target_rel / (in.resource_degree * in.n_wid);
    } else {
        w = target_rel * std::numbers::pi * std::numbers::pi * in.n0 * in.n0 * in.n0 /
            (std::numbers::sqrt2 * in.resource_degree * in.n_wid);
    }
    // snap down: nWid must be an integer number of steps
    const double divisions = std::ceil(in.n_wid / w - 1e-9);
    return in.n_wid / divisions;
}

ComplexityEstimate estimate_complexity(int resource_degree, int num_codewords,
                                       const DiscretizationParams& params, DetectorPath path) {
    if (resource_degree < 1 || num_codewords < 1)
        throw std::invalid_argument("estimate_complexity: invalid dimensions");
    ComplexityEstimate est;
    const double df = resource_degree;
    const double m = num_codewords;
    switch (path) {
        case DetectorPath::mpa:
            est.operations = df * std::pow(m, df);
            break;
        case DetectorPath::mpa_split:
            est.operations = df * std::pow(m, df / 2.0);
            break;
        case DetectorPath::dmpa_1d: {
            const std::size_t n = padded_length(params);
            est.transform_length = n;
            est.transforms = 2 * resource_degree + 1;  // d_f+1 forward, d_f inverse
            const double nd = static_cast<double>(n);
            est.operations = est.transforms * nd * std::log2(nd) + df * df * nd;
            break;
        }
        case DetectorPath::dmpa_2d: {
            const std::size_t n = padded_length(params);
            est.transform_length = n;
            est.transforms = 2 * resource_degree + 1;
            const double cells = static_cast<double>(n) * static_cast<double>(n);
            est.operations =
                est.transforms * cells * 2.0 * std::log2(static_cast<double>(n)) +
                df * df * cells;
            break;
        }
    }
    return est;
}

}  // namespace scma
