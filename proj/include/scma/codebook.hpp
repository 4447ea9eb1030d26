#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace scma {

using cplx = std::complex<double>;

/// An SCMA codebook: `num_layers` layers, each holding `num_codewords`
/// complex codewords of length `num_resources`. Every layer has the same
/// `num_nonzero` support positions across all of its codewords.
struct Codebook {
    int num_resources = 0;  // K, codeword length
    int num_layers = 0;     // J
    int num_codewords = 0;  // M, per layer
    int num_nonzero = 0;    // N, support size per layer

    // layer-major, then codeword, then resource
    std::vector<cplx> entries;

    cplx entry(int layer, int codeword, int resource) const {
        return entries[(static_cast<std::size_t>(layer) * num_codewords + codeword) * num_resources +
                       resource];
    }
    cplx& entry(int layer, int codeword, int resource) {
        return entries[(static_cast<std::size_t>(layer) * num_codewords + codeword) * num_resources +
                       resource];
    }

    // Resources where at least one codeword of `layer` is nonzero, ascending.
    std::vector<int> support(int layer) const;

    // Throws std::invalid_argument on any invariant violation (dimensions,
    // codeword count not a power of two, inconsistent zero support).
    void validate() const;
};

/// Per-layer channel gain vectors, dimensioned like the codebook (J x K).
struct ChannelVectors {
    int num_resources = 0;
    int num_layers = 0;
    std::vector<cplx> gains;  // layer-major, then resource

    cplx gain(int layer, int resource) const {
        return gains[static_cast<std::size_t>(layer) * num_resources + resource];
    }
    cplx& gain(int layer, int resource) {
        return gains[static_cast<std::size_t>(layer) * num_resources + resource];
    }

    static ChannelVectors all_ones(int num_layers, int num_resources);
};

// Plain-text codebook format: first non-comment line is "K J M N", then
// J*M lines of 2K floats (re/im pairs in resource order), layer-major then
// codeword-major. '#' starts a comment line.
Codebook load_codebook(const std::string& path);
void save_codebook(const Codebook& cb, const std::string& path);

// Random codebook whose real and imaginary parts are independent: per layer
// and support position, sqrt(M) distinct real values and sqrt(M) distinct
// imaginary values in [-1,1]; codewords are their Cartesian product. Layers
// follow the K-choose-2 pair structure. Deterministic given `seed`.
Codebook generate_separable_codebook(int num_resources, int num_codewords, std::uint64_t seed);

// Absorbs channel gains into the codebook (entries h_kj * x_kjm), reducing
// any channel to the all-ones case for the detectors.
Codebook effective_codebook(const Codebook& cb, const ChannelVectors& h);

// Smallest bound such that every real and imaginary component of every
// entry lies in [-bound, bound].
double amplitude_bound(const Codebook& cb);

/// Decomposition of a separable codebook. Codeword m of a layer equals
/// real_parts[r] + i*imag_parts[q] with r = real_index[layer][m],
/// q = imag_index[layer][m]. Projection sets are kept in lexicographic
/// order; their sizes satisfy real_count * imag_count == M and are the same
/// for every layer (the usual case is real_count == imag_count == sqrt(M),
/// a degenerate dimension shows up as a count of 1).
struct SeparableView {
    int real_count = 0;
    int imag_count = 0;
    std::vector<std::vector<int>> real_index;  // [layer][codeword]
    std::vector<std::vector<int>> imag_index;
    // [layer][sub * K + resource]
    std::vector<std::vector<double>> real_parts;
    std::vector<std::vector<double>> imag_parts;
};

// Exact-equality decomposition; nullopt when some layer's codeword set is
// not the Cartesian product of its projected real and imaginary sets.
std::optional<SeparableView> try_separate(const Codebook& cb);

bool is_separable(const Codebook& cb);

}  // namespace scma
