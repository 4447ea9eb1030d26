#include "scma/spectral.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace scma::spectral {

namespace {

// Complex products in the kernels are written out on split re/im arrays;
// std::complex operator* routes through the checked libcall and is several
// times slower.

struct Plan {
    std::size_t n = 0;
    std::vector<std::size_t> rev;   // bit-reversal permutation
    std::vector<double> twr, twi;   // stage twiddles, concatenated (n-1 total)
};

Plan make_plan(std::size_t n) {
    Plan p;
    p.n = n;
    std::size_t stages = 0;
    while ((std::size_t{1} << stages) < n) ++stages;
    p.rev.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0;
        for (std::size_t b = 0; b < stages; ++b)
            if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (stages - 1 - b);
        p.rev[i] = r;
    }
    p.twr.reserve(n);
    p.twi.reserve(n);
    for (std::size_t len = 2; len <= n; len <<= 1)
        for (std::size_t k = 0; k < len / 2; ++k) {
            const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) /
                               static_cast<double>(len);
            p.twr.push_back(std::cos(ang));
            p.twi.push_back(std::sin(ang));
        }
    return p;
}

const Plan& plan_for(std::size_t n) {
    // per-thread front cache so steady-state lookups stay lock-free
    thread_local std::map<std::size_t, const Plan*> local;
    if (const auto it = local.find(n); it != local.end()) return *it->second;

    static std::mutex mtx;
    static std::map<std::size_t, std::unique_ptr<const Plan>> cache;
    const Plan* plan;
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto& slot = cache[n];
        if (!slot) slot = std::make_unique<const Plan>(make_plan(n));
        plan = slot.get();
    }
    local.emplace(n, plan);
    return *plan;
}

// e^{-2*pi*i*k/n} for k = 0..n/2, used by the real-input transforms.
struct RealPlan {
    std::vector<double> wr, wi;
};

const RealPlan& real_plan_for(std::size_t n) {
    thread_local std::map<std::size_t, const RealPlan*> local;
    if (const auto it = local.find(n); it != local.end()) return *it->second;

    static std::mutex mtx;
    static std::map<std::size_t, std::unique_ptr<const RealPlan>> cache;
    const RealPlan* plan;
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto& slot = cache[n];
        if (!slot) {
            auto p = std::make_unique<RealPlan>();
            p->wr.resize(n / 2 + 1);
            p->wi.resize(n / 2 + 1);
            for (std::size_t k = 0; k <= n / 2; ++k) {
                const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) /
                                   static_cast<double>(n);
                p->wr[k] = std::cos(ang);
                p->wi[k] = std::sin(ang);
            }
            slot = std::move(p);
        }
        plan = slot.get();
    }
    local.emplace(n, plan);
    return *plan;
}

// scratch for the half-size transforms inside rfft/irfft
std::pair<double*, double*> half_scratch(std::size_t h) {
    thread_local std::vector<double> zr, zi;
    if (zr.size() < h) {
        zr.resize(h);
        zi.resize(h);
    }
    return {zr.data(), zi.data()};
}

void require_power_of_two(std::size_t n) {
    if (!is_power_of_two(n))
        throw std::invalid_argument("spectral: length must be a power of two >= 2");
}

void split(const std::vector<cplx>& x, std::vector<double>& re, std::vector<double>& im) {
    re.resize(x.size());
    im.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        re[i] = x[i].real();
        im[i] = x[i].imag();
    }
}

std::vector<cplx> join(const std::vector<double>& re, const std::vector<double>& im) {
    std::vector<cplx> out(re.size());
    for (std::size_t i = 0; i < re.size(); ++i) out[i] = cplx{re[i], im[i]};
    return out;
}

void fft_rows(double* re, double* im, std::size_t side) {
    for (std::size_t r = 0; r < side; ++r) fft(re + r * side, im + r * side, side);
}

void fft_cols(double* re, double* im, std::size_t side) {
    std::vector<double> cr(side), ci(side);
    for (std::size_t c = 0; c < side; ++c) {
        for (std::size_t r = 0; r < side; ++r) {
            cr[r] = re[r * side + c];
            ci[r] = im[r * side + c];
        }
        fft(cr.data(), ci.data(), side);
        for (std::size_t r = 0; r < side; ++r) {
            re[r * side + c] = cr[r];
            im[r * side + c] = ci[r];
        }
    }
}

}  // namespace

bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
    std::size_t p = 2;
    while (p < n) p <<= 1;
    return p;
}

void fft(double* re, double* im, std::size_t n) {
    require_power_of_two(n);
    const Plan& p = plan_for(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = p.rev[i];
        if (i < j) {
            std::swap(re[i], re[j]);
            std::swap(im[i], im[j]);
        }
    }
    const double* tr = p.twr.data();
    const double* ti = p.twi.data();
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        for (std::size_t base = 0; base < n; base += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const std::size_t a = base + k;
                const std::size_t b = a + half;
                const double vr = re[b] * tr[k] - im[b] * ti[k];
                const double vi = re[b] * ti[k] + im[b] * tr[k];
                const double ur = re[a];
                const double ui = im[a];
                re[a] = ur + vr;
                im[a] = ui + vi;
                re[b] = ur - vr;
                im[b] = ui - vi;
            }
        }
        tr += half;
        ti += half;
    }
}

void ifft(double* re, double* im, std::size_t n) {
    // swap re/im, run forward, swap back == conjugate transform
    fft(im, re, n);
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        re[i] *= inv;
        im[i] *= inv;
    }
}

Spectrum dft_forward(const std::vector<cplx>& x) {
    std::vector<double> re, im;
    split(x, re, im);
    fft(re.data(), im.data(), x.size());
    return join(re, im);
}

std::vector<cplx> dft_inverse(const Spectrum& x) {
    std::vector<double> re, im;
    split(x, re, im);
    ifft(re.data(), im.data(), x.size());
    return join(re, im);
}

Spectrum dft_forward_2d(const std::vector<cplx>& x, std::size_t side) {
    require_power_of_two(side);
    if (x.size() != side * side)
        throw std::invalid_argument("spectral: 2-D input must be side*side");
    std::vector<double> re, im;
    split(x, re, im);
    fft_rows(re.data(), im.data(), side);
    fft_cols(re.data(), im.data(), side);
    return join(re, im);
}

std::vector<cplx> dft_inverse_2d(const Spectrum& x, std::size_t side) {
    require_power_of_two(side);
    if (x.size() != side * side)
        throw std::invalid_argument("spectral: 2-D input must be side*side");
    // conjugate trick again: swapping re/im turns rows+cols into the inverse
    std::vector<double> re, im;
    split(x, re, im);
    fft_rows(im.data(), re.data(), side);
    fft_cols(im.data(), re.data(), side);
    std::vector<cplx> out(x.size());
    const double inv = 1.0 / static_cast<double>(side * side);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = cplx{re[i] * inv, im[i] * inv};
    return out;
}

void rfft(const double* x, std::size_t n, double* sr, double* si) {
    require_power_of_two(n);
    const std::size_t h = n / 2;
    if (h == 1) {
        sr[0] = x[0] + x[1];
        si[0] = 0.0;
        sr[1] = x[0] - x[1];
        si[1] = 0.0;
        return;
    }
    // pack even/odd samples into a half-size complex transform
    auto [zr, zi] = half_scratch(h);
    for (std::size_t t = 0; t < h; ++t) {
        zr[t] = x[2 * t];
        zi[t] = x[2 * t + 1];
    }
    fft(zr, zi, h);
    const RealPlan& rp = real_plan_for(n);
    for (std::size_t k = 0; k <= h; ++k) {
        const std::size_t kc = (h - k) % h;  // h maps back to 0
        const double a = zr[k % h], b = zi[k % h];
        const double c = zr[kc], d = zi[kc];
        const double er = 0.5 * (a + c);
        const double ei = 0.5 * (b - d);
        const double or_ = 0.5 * (b + d);
        const double oi = -0.5 * (a - c);
        sr[k] = er + rp.wr[k] * or_ - rp.wi[k] * oi;
        si[k] = ei + rp.wr[k] * oi + rp.wi[k] * or_;
    }
}

void irfft(const double* sr, const double* si, std::size_t n, double* x) {
    require_power_of_two(n);
    const std::size_t h = n / 2;
    if (h == 1) {
        x[0] = 0.5 * (sr[0] + sr[1]);
        x[1] = 0.5 * (sr[0] - sr[1]);
        return;
    }
    const RealPlan& rp = real_plan_for(n);
    auto [zr, zi] = half_scratch(h);
    for (std::size_t k = 0; k < h; ++k) {
        const std::size_t kc = h - k;  // valid: spectrum has h+1 bins
        const double xr = sr[k], xi = si[k];
        const double yr = sr[kc], yi = -si[kc];  // conj(X[h-k])
        const double er = 0.5 * (xr + yr);
        const double ei = 0.5 * (xi + yi);
        const double dr = 0.5 * (xr - yr);
        const double di = 0.5 * (xi - yi);
        // O[k] = conj(w_k) * d
        const double or_ = rp.wr[k] * dr + rp.wi[k] * di;
        const double oi = rp.wr[k] * di - rp.wi[k] * dr;
        // Z[k] = E[k] + i O[k]
        zr[k] = er - oi;
        zi[k] = ei + or_;
    }
    ifft(zr, zi, h);
    for (std::size_t t = 0; t < h; ++t) {
        x[2 * t] = zr[t];
        x[2 * t + 1] = zi[t];
    }
}

std::vector<cplx> circular_convolve(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("circular_convolve: length mismatch");
    require_power_of_two(a.size());
    const std::size_t n = a.size();
    std::vector<double> ar, ai, br, bi;
    split(a, ar, ai);
    split(b, br, bi);
    fft(ar.data(), ai.data(), n);
    fft(br.data(), bi.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ar[i] * br[i] - ai[i] * bi[i];
        const double m = ar[i] * bi[i] + ai[i] * br[i];
        ar[i] = r;
        ai[i] = m;
    }
    ifft(ar.data(), ai.data(), n);
    return join(ar, ai);
}

std::vector<double> circular_convolve(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("circular_convolve: length mismatch");
    require_power_of_two(a.size());
    const std::size_t n = a.size();
    std::vector<double> ar(n / 2 + 1), ai(n / 2 + 1), br(n / 2 + 1), bi(n / 2 + 1);
    rfft(a.data(), n, ar.data(), ai.data());
    rfft(b.data(), n, br.data(), bi.data());
    for (std::size_t i = 0; i <= n / 2; ++i) {
        const double r = ar[i] * br[i] - ai[i] * bi[i];
        const double m = ar[i] * bi[i] + ai[i] * br[i];
        ar[i] = r;
        ai[i] = m;
    }
    std::vector<double> out(n);
    irfft(ar.data(), ai.data(), n, out.data());
    return out;
}

std::vector<double> linear_convolve_direct(const std::vector<double>& a,
                                           const std::vector<double>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k) out[i + k] += a[i] * b[k];
    return out;
}

std::vector<cplx> linear_convolve_direct(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<cplx> out(a.size() + b.size() - 1, cplx{});
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k) out[i + k] += a[i] * b[k];
    return out;
}

}  // namespace scma::spectral
