#pragma once

#include <vector>

#include "penloss/penetration_models.hpp"
#include "penloss/sweep_data.hpp"

namespace penloss {

/// Ordinary-least-squares straight-line fit of a loss series.
struct FitResult {
    LinearLossModel model;         ///< source = Fitted; validity = series span
    PenetrationLossSeries series;  ///< data the fit was computed from
    std::vector<double> residuals_db;
    double residual_rms_db = 0.0;
    double r_squared = 0.0;         ///< meaningful only when r_squared_defined
    bool r_squared_defined = false; ///< false when the series has zero variance
};

/// Closed-form normal equations on centered frequencies. Requires at least
/// two distinct frequencies.
FitResult fit_linear(const PenetrationLossSeries& series);

/// Differences and RMSE between the fitted data points and a reference
/// model, on the series' own frequency grid. Comparing a result against its
/// own model reproduces the fit residuals.
ModelComparison fit_report(const FitResult& result, const LinearLossModel& reference);

}  // namespace penloss
