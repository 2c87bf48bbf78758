#ifndef FMCW_FFT_HPP
#define FMCW_FFT_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace fmcw {

namespace detail {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 Cooley-Tukey, in place, unnormalized forward DFT.
inline void fft_radix2(std::vector<std::complex<double>>& x) {
    const std::size_t n = x.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = -2.0 * M_PI / static_cast<double>(len);
        std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                std::complex<double> u = x[i + k];
                std::complex<double> v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

// O(n^2) fallback for lengths that are not a power of two.
inline void dft_direct(std::vector<std::complex<double>>& x) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t m = 0; m < n; ++m) {
            double ang = -2.0 * M_PI * static_cast<double>(k) * static_cast<double>(m) /
                         static_cast<double>(n);
            acc += x[m] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    x = std::move(out);
}

}  // namespace detail

/// In-place unnormalized forward DFT. Radix-2 when the length allows it.
inline void fft(std::vector<std::complex<double>>& x) {
    if (x.size() <= 1) return;
    if (detail::is_power_of_two(x.size()))
        detail::fft_radix2(x);
    else
        detail::dft_direct(x);
}

}  // namespace fmcw

#endif
