#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "scma/codebook.hpp"

namespace scma {

/// Complex AWGN model: n ~ CN(0, N0 I), i.e. real and imaginary parts are
/// each N(0, N0/2). `n_wid` is the half-width outside which the discretized
/// noise pdf is treated as zero.
struct NoiseModel {
    double n0 = 0.02;
    double n_wid = 5.0;

    double sigma2() const { return 0.5 * n0; }  // per real dimension
    // eta(n_wid) / eta(0) for the 1-D density; must stay below 1e-12.
    double truncation_ratio() const;
    void validate() const;
};

using ReceivedSignal = std::vector<cplx>;

/// Ground truth of one transmission, kept for BLER scoring.
struct TransmitRecord {
    std::vector<int> indices;  // per-layer codeword index
    ReceivedSignal y;
};

// Maps J*log2(M) bits to per-layer codeword indices; each layer's group of
// log2(M) bits is read big-endian.
std::vector<int> encode(const std::vector<std::uint8_t>& bits, const Codebook& cb);

// Noiseless superposition y_k = sum_j x_kj over the selected codewords.
ReceivedSignal superpose(const std::vector<int>& indices, const Codebook& cb);

// y = superposition + CN(0, N0 I); the codebook is assumed channel-scaled
// already. Deterministic given the engine state.
ReceivedSignal transmit(const std::vector<int>& indices, const Codebook& cb,
                        const NoiseModel& noise, std::mt19937_64& rng);

}  // namespace scma
