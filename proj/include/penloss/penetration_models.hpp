#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "penloss/sweep_data.hpp"

namespace penloss {

enum class ModelSource { Fitted, Tr38901 };

std::string_view to_string(ModelSource s);
ModelSource model_source_from_string(std::string_view text);

/// Straight-line penetration loss model PL(f) = k*f + b with f in GHz.
struct LinearLossModel {
    std::string name;
    double slope_db_per_ghz = 0.0;
    double intercept_db = 0.0;
    double range_lo_ghz = 0.0;
    double range_hi_ghz = 0.0;
    ModelSource source = ModelSource::Fitted;

    double line(double f_ghz) const { return slope_db_per_ghz * f_ghz + intercept_db; }
    bool in_range(double f_ghz) const { return f_ghz >= range_lo_ghz && f_ghz <= range_hi_ghz; }
    void validate() const;
};

/// Evaluation result; use outside the validity range is flagged, never
/// silently extrapolated and never a failure.
struct ModelValue {
    double loss_db = 0.0;
    bool in_range = true;
};

ModelValue evaluate(const LinearLossModel& model, double f_ghz);

/// Per-frequency differences between two loss curves plus their RMSE.
struct ModelComparison {
    std::vector<double> grid_ghz;
    std::vector<double> differences_db;
    double rmse_db = 0.0;

    double min_difference_db() const;
    double max_difference_db() const;
};

/// Built-in model catalog: fitted lines for the measured boards and slabs
/// plus the TR 38.901 wood, glass and concrete reference rows.
const std::vector<LinearLossModel>& catalog();

/// nullptr when no catalog entry carries this exact name.
const LinearLossModel* find_in_catalog(std::string_view name);

/// Throws an Error listing the known names when the lookup fails.
const LinearLossModel& catalog_entry(std::string_view name);

/// Default comparison grid: the twelve measurement centers 4.5-15.5 GHz.
std::vector<double> default_comparison_grid();

/// differences[i] = a(f_i) - b(f_i); rmse = sqrt(mean(differences^2)).
ModelComparison compare(const LinearLossModel& a, const LinearLossModel& b,
                        const std::vector<double>& grid_ghz);

/// Series against model on the series' own frequency grid.
ModelComparison compare(const PenetrationLossSeries& a, const LinearLossModel& b);

/// b(f) - a(f): reference-minus-fitted difference at a single frequency.
double difference_at(const LinearLossModel& a, const LinearLossModel& b, double f_ghz);

}  // namespace penloss
