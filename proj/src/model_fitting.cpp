#include "penloss/model_fitting.hpp"

#include <algorithm>
#include <cmath>

namespace penloss {

FitResult fit_linear(const PenetrationLossSeries& series)
{
    series.validate();
    const std::size_t n = series.points.size();
    if (n < 2)
        throw Error("fit: series has " + std::to_string(n) + " point(s); need at least 2");

    double f_mean = 0.0;
    double y_mean = 0.0;
    for (const auto& p : series.points) {
        f_mean += p.center_ghz;
        y_mean += p.loss_db;
    }
    f_mean /= static_cast<double>(n);
    y_mean /= static_cast<double>(n);

    // Frequencies are centered before solving, which keeps the normal
    // equations well conditioned at GHz magnitudes.
    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& p : series.points) {
        const double dx = p.center_ghz - f_mean;
        sxx += dx * dx;
        sxy += dx * (p.loss_db - y_mean);
    }
    if (!(sxx > 0.0)) throw Error("fit: all frequencies identical; slope is undetermined");

    const double slope = sxy / sxx;
    const double intercept = y_mean - slope * f_mean;

    FitResult result;
    result.model = LinearLossModel{series.material_name, slope, intercept,
                                   series.points.front().center_ghz,
                                   series.points.back().center_ghz, ModelSource::Fitted};
    result.series = series;
    result.residuals_db.reserve(n);

    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (const auto& p : series.points) {
        const double r = p.loss_db - result.model.line(p.center_ghz);
        result.residuals_db.push_back(r);
        ss_res += r * r;
        const double dy = p.loss_db - y_mean;
        ss_tot += dy * dy;
    }
    result.residual_rms_db = std::sqrt(ss_res / static_cast<double>(n));
    result.r_squared_defined = ss_tot > 0.0;
    result.r_squared =
        result.r_squared_defined ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 0.0;
    return result;
}

ModelComparison fit_report(const FitResult& result, const LinearLossModel& reference)
{
    return compare(result.series, reference);
}

}  // namespace penloss
