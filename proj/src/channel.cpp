#include "scma/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace scma {

double NoiseModel::truncation_ratio() const {
    return std::exp(-n_wid * n_wid / (2.0 * sigma2()));
}

void NoiseModel::validate() const {
    if (!(n0 > 0.0)) throw std::invalid_argument("noise model: N0 must be positive");
    if (!(n_wid > 0.0)) throw std::invalid_argument("noise model: nWid must be positive");
    if (!(truncation_ratio() < 1e-12))
        throw std::invalid_argument(
            "noise model: density not negligible at nWid; increase nWid or reduce N0");
}

std::vector<int> encode(const std::vector<std::uint8_t>& bits, const Codebook& cb) {
    int bits_per_layer = 0;
    for (int m = cb.num_codewords; m > 1; m >>= 1) ++bits_per_layer;
    const std::size_t expect = static_cast<std::size_t>(cb.num_layers) * bits_per_layer;
    if (bits.size() != expect)
        throw std::invalid_argument("encode: expected J*log2(M) bits");

    std::vector<int> indices(cb.num_layers);
    for (int j = 0; j < cb.num_layers; ++j) {
        int idx = 0;
        for (int b = 0; b < bits_per_layer; ++b)
            idx = (idx << 1) | (bits[static_cast<std::size_t>(j) * bits_per_layer + b] & 1);
        indices[j] = idx;
    }
    return indices;
}

ReceivedSignal superpose(const std::vector<int>& indices, const Codebook& cb) {
    if (static_cast<int>(indices.size()) != cb.num_layers)
        throw std::invalid_argument("superpose: need one codeword index per layer");
    ReceivedSignal y(cb.num_resources, cplx{});
    for (int j = 0; j < cb.num_layers; ++j) {
        const int m = indices[j];
        if (m < 0 || m >= cb.num_codewords)
            throw std::invalid_argument("superpose: codeword index out of range");
        for (int k = 0; k < cb.num_resources; ++k) y[k] += cb.entry(j, m, k);
    }
    return y;
}

ReceivedSignal transmit(const std::vector<int>& indices, const Codebook& cb,
                        const NoiseModel& noise, std::mt19937_64& rng) {
    ReceivedSignal y = superpose(indices, cb);
    if (noise.n0 <= 0.0) return y;
    std::normal_distribution<double> gauss(0.0, std::sqrt(noise.sigma2()));
    for (auto& yk : y) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        yk += cplx{re, im};
    }
    return y;
}

}  // namespace scma
