#include "penloss/penetration_models.hpp"

#include <algorithm>
#include <cmath>

namespace penloss {

namespace {

constexpr double kFittedLoGhz = 4.5;
constexpr double kFittedHiGhz = 15.5;
// TR 38.901 material penetration models apply over 0.5-100 GHz.
constexpr double kTrLoGhz = 0.5;
constexpr double kTrHiGhz = 100.0;

LinearLossModel fitted(const char* name, double k, double b)
{
    return {name, k, b, kFittedLoGhz, kFittedHiGhz, ModelSource::Fitted};
}

LinearLossModel tr(const char* name, double k, double b)
{
    return {name, k, b, kTrLoGhz, kTrHiGhz, ModelSource::Tr38901};
}

}  // namespace

std::string_view to_string(ModelSource s)
{
    return s == ModelSource::Fitted ? "fitted" : "tr38901";
}

ModelSource model_source_from_string(std::string_view text)
{
    if (text == "fitted") return ModelSource::Fitted;
    if (text == "tr38901") return ModelSource::Tr38901;
    throw Error("unknown model source '" + std::string(text) + "' (expected fitted or tr38901)");
}

void LinearLossModel::validate() const
{
    if (name.empty()) throw Error("model: name is empty");
    if (!std::isfinite(slope_db_per_ghz) || !std::isfinite(intercept_db))
        throw Error("model '" + name + "': parameters must be finite");
    if (!(range_lo_ghz < range_hi_ghz))
        throw Error("model '" + name + "': validity range lo must be below hi");
}

ModelValue evaluate(const LinearLossModel& model, double f_ghz)
{
    return {model.line(f_ghz), model.in_range(f_ghz)};
}

double ModelComparison::min_difference_db() const
{
    if (differences_db.empty()) throw Error("comparison: no differences");
    return *std::min_element(differences_db.begin(), differences_db.end());
}

double ModelComparison::max_difference_db() const
{
    if (differences_db.empty()) throw Error("comparison: no differences");
    return *std::max_element(differences_db.begin(), differences_db.end());
}

const std::vector<LinearLossModel>& catalog()
{
    static const std::vector<LinearLossModel> rows = {
        fitted("Wooden Board 1", 0.23, 1.75),
        fitted("Wooden Board 2", 0.23, 1.52),
        fitted("Wooden Board 3", 0.07, 3.55),
        tr("TR 38.901 Wood Model", 0.12, 4.85),
        fitted("Double-Layer Glass", 0.30, 2.30),
        fitted("Frost Glass", -0.06, 3.94),
        tr("TR 38.901 Glass Model", 0.20, 2.00),
        fitted("Foam Board 1", -0.01, 1.84),
        fitted("Foam Board 2", -0.05, 1.97),
        fitted("Foam Board 3", -0.01, 1.44),
        fitted("Concrete Slab", 0.95, 9.83),
        tr("TR 38.901 Concrete Model", 4.00, 5.00),
    };
    return rows;
}

const LinearLossModel* find_in_catalog(std::string_view name)
{
    for (const auto& model : catalog()) {
        if (model.name == name) return &model;
    }
    return nullptr;
}

const LinearLossModel& catalog_entry(std::string_view name)
{
    if (const auto* model = find_in_catalog(name)) return *model;
    std::string known;
    for (const auto& model : catalog()) {
        if (!known.empty()) known += ", ";
        known += model.name;
    }
    throw Error("unknown catalog model '" + std::string(name) + "' (known: " + known + ")");
}

std::vector<double> default_comparison_grid()
{
    return BandPlan::default_plan().centers_ghz;
}

namespace {

ModelComparison finish_comparison(std::vector<double> grid, std::vector<double> diffs)
{
    double sum_sq = 0.0;
    for (double d : diffs) sum_sq += d * d;
    ModelComparison out;
    out.rmse_db = std::sqrt(sum_sq / static_cast<double>(diffs.size()));
    out.grid_ghz = std::move(grid);
    out.differences_db = std::move(diffs);
    return out;
}

}  // namespace

ModelComparison compare(const LinearLossModel& a, const LinearLossModel& b,
                        const std::vector<double>& grid_ghz)
{
    if (grid_ghz.empty()) throw Error("compare: empty frequency grid");
    std::vector<double> diffs;
    diffs.reserve(grid_ghz.size());
    for (double f : grid_ghz) diffs.push_back(a.line(f) - b.line(f));
    return finish_comparison(grid_ghz, std::move(diffs));
}

ModelComparison compare(const PenetrationLossSeries& a, const LinearLossModel& b)
{
    a.validate();
    std::vector<double> grid = a.frequencies_ghz();
    std::vector<double> diffs;
    diffs.reserve(a.points.size());
    for (const auto& p : a.points) diffs.push_back(p.loss_db - b.line(p.center_ghz));
    return finish_comparison(std::move(grid), std::move(diffs));
}

double difference_at(const LinearLossModel& a, const LinearLossModel& b, double f_ghz)
{
    return b.line(f_ghz) - a.line(f_ghz);
}

}  // namespace penloss
