#pragma once

#include <filesystem>

#include "penloss/model_fitting.hpp"
#include "penloss/penetration_models.hpp"
#include "penloss/sweep_data.hpp"

namespace penloss {

/// Segment CSV: header `freq_hz,s21_re,s21_im`, decimal notation, LF line
/// endings. Reading validates point count, grid uniformity and span against
/// the plan and assigns the matching plan center; every malformed input
/// yields a diagnostic naming the offending row or field.
SweepSegment read_sweep_segment(const std::filesystem::path& path, const BandPlan& plan);
void write_sweep_segment(const SweepSegment& segment, const std::filesystem::path& path);

/// Manifest JSON with keys material_name, category, thickness_cm, width_cm,
/// height_cm, repeats, plan {centers_ghz, bandwidth_ghz, points} and
/// segments [{center_ghz, repeat, scenario, path}]. Segment paths resolve
/// relative to the manifest directory; reading checks they exist.
MeasurementManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const MeasurementManifest& manifest, const std::filesystem::path& path);

/// Loss-series CSV: header `center_freq_ghz,pl_db`, 6-decimal fixed
/// precision; round-trips losslessly at that precision.
PenetrationLossSeries read_loss_series(const std::filesystem::path& path);
void write_loss_series(const PenetrationLossSeries& series, const std::filesystem::path& path);

/// Model JSON: {name, slope_db_per_ghz, intercept_db, valid_range_ghz,
/// source}.
LinearLossModel read_model(const std::filesystem::path& path);
void write_model(const LinearLossModel& model, const std::filesystem::path& path);

/// Comparison exports: CSV `freq_ghz,diff_db` plus a summary JSON
/// {rmse_db, min_diff_db, max_diff_db}.
void write_comparison_csv(const ModelComparison& comparison, const std::filesystem::path& path);
void write_comparison_summary(const ModelComparison& comparison, const std::filesystem::path& path);

/// Residuals CSV: `freq_ghz,residual_db`.
void write_residuals_csv(const FitResult& result, const std::filesystem::path& path);

}  // namespace penloss
