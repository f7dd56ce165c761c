#pragma once

#include <span>
#include <vector>

#include "penloss/sweep_data.hpp"

namespace penloss {

/// X[k] = sum_n x[n] exp(-j 2 pi k n / N).
std::vector<cplx> dft_forward(std::span<const cplx> x);

/// x[n] = (1/N) sum_k X[k] exp(+j 2 pi k n / N).
std::vector<cplx> dft_inverse(std::span<const cplx> x);

}  // namespace penloss
