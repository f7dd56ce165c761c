#include "penloss/dft.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace penloss {

namespace {

bool is_pow2(std::size_t n)
{
    return n != 0 && (n & (n - 1)) == 0;
}

// Iterative radix-2 Cooley-Tukey; sign -1 forward, +1 inverse. No scaling.
void fft_pow2(std::vector<cplx>& a, double sign)
{
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j |= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx w = std::polar(1.0, ang * static_cast<double>(k));
                const cplx u = a[i + k];
                const cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
}

// O(N^2) fallback for plans with non power-of-two point counts.
std::vector<cplx> direct(std::span<const cplx> x, double sign)
{
    const std::size_t n = x.size();
    std::vector<cplx> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc{0.0, 0.0};
        for (std::size_t m = 0; m < n; ++m) {
            const double ang = sign * 2.0 * std::numbers::pi *
                               static_cast<double>(k * m % n) / static_cast<double>(n);
            acc += x[m] * std::polar(1.0, ang);
        }
        out[k] = acc;
    }
    return out;
}

std::vector<cplx> transform(std::span<const cplx> x, double sign)
{
    if (x.empty()) return {};
    if (is_pow2(x.size())) {
        std::vector<cplx> a(x.begin(), x.end());
        fft_pow2(a, sign);
        return a;
    }
    return direct(x, sign);
}

}  // namespace

std::vector<cplx> dft_forward(std::span<const cplx> x)
{
    return transform(x, -1.0);
}

std::vector<cplx> dft_inverse(std::span<const cplx> x)
{
    std::vector<cplx> out = transform(x, +1.0);
    if (out.empty()) return out;
    const double scale = 1.0 / static_cast<double>(out.size());
    for (auto& v : out) v *= scale;
    return out;
}

}  // namespace penloss
