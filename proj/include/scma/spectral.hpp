#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace scma::spectral {

using cplx = std::complex<double>;

// Transform-domain sequence (or row-major square matrix for the 2-D
// variants); lengths are powers of two.
using Spectrum = std::vector<cplx>;

bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);

// In-place radix-2 transforms on split re/im arrays. Length must be a power
// of two. Forward is unnormalized; inverse applies 1/n. Twiddle and
// bit-reversal tables are precomputed per length and shared.
void fft(double* re, double* im, std::size_t n);
void ifft(double* re, double* im, std::size_t n);

// Convenience wrappers on complex sequences (1-D and 2-D square, row-major).
Spectrum dft_forward(const std::vector<cplx>& x);
std::vector<cplx> dft_inverse(const Spectrum& x);
Spectrum dft_forward_2d(const std::vector<cplx>& x, std::size_t side);
std::vector<cplx> dft_inverse_2d(const Spectrum& x, std::size_t side);

// Real-input transform of length n (power of two, n >= 2), computed through
// a half-size complex FFT. Writes bins 0..n/2 into sr/si (n/2+1 values);
// the remaining bins follow from Hermitian symmetry.
void rfft(const double* x, std::size_t n, double* sr, double* si);
// Inverse of rfft: reconstructs the length-n real sequence (1/n normalized).
void irfft(const double* sr, const double* si, std::size_t n, double* x);

// Circular convolution of equal-length power-of-two sequences via the
// transform-domain pointwise product.
std::vector<cplx> circular_convolve(const std::vector<cplx>& a, const std::vector<cplx>& b);
std::vector<double> circular_convolve(const std::vector<double>& a, const std::vector<double>& b);

// Direct-summation linear convolution, length |a|+|b|-1. Quadratic; kept as
// the slow reference path.
std::vector<double> linear_convolve_direct(const std::vector<double>& a,
                                           const std::vector<double>& b);
std::vector<cplx> linear_convolve_direct(const std::vector<cplx>& a, const std::vector<cplx>& b);

}  // namespace scma::spectral
