#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <doctest.h>

#include "penloss/dft.hpp"

using namespace penloss;

namespace {

// Independent reference: direct O(N^2) inverse summation.
std::vector<cplx> inverse_by_summation(const std::vector<cplx>& x)
{
    const std::size_t n = x.size();
    std::vector<cplx> out(n);
    for (std::size_t m = 0; m < n; ++m) {
        cplx acc{0.0, 0.0};
        for (std::size_t k = 0; k < n; ++k) {
            const double ang = 2.0 * std::numbers::pi * static_cast<double>(k) *
                               static_cast<double>(m) / static_cast<double>(n);
            acc += x[k] * cplx{std::cos(ang), std::sin(ang)};
        }
        out[m] = acc / static_cast<double>(n);
    }
    return out;
}

std::vector<cplx> random_spectrum(std::size_t n, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<cplx> x(n);
    for (auto& v : x) v = cplx{u(rng), u(rng)};
    return x;
}

}  // namespace

TEST_CASE("inverse transform matches direct summation")
{
    for (std::size_t n : {std::size_t{256}, std::size_t{12}}) {
        const auto x = random_spectrum(n, 17);
        const auto fast = dft_inverse(x);
        const auto reference = inverse_by_summation(x);
        REQUIRE(fast.size() == n);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(std::abs(fast[i] - reference[i]) < 1e-12);
        }
    }
}

TEST_CASE("flat spectrum maps to a unit impulse")
{
    const std::vector<cplx> flat(256, cplx{1.0, 0.0});
    const auto taps = dft_inverse(flat);
    CHECK(std::abs(taps[0] - cplx{1.0, 0.0}) < 1e-13);
    for (std::size_t i = 1; i < taps.size(); ++i) CHECK(std::abs(taps[i]) < 1e-13);
}

TEST_CASE("forward of inverse returns the input")
{
    const auto x = random_spectrum(256, 99);
    const auto back = dft_forward(dft_inverse(x));
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(std::abs(back[i] - x[i]) < 1e-12);
    }
}

TEST_CASE("empty input stays empty")
{
    CHECK(dft_forward({}).empty());
    CHECK(dft_inverse({}).empty());
}
