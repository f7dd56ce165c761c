#include "penloss/sweep_data.hpp"

#include <cmath>
#include <sstream>

namespace penloss {

namespace {

std::string format_ghz(double value)
{
    std::ostringstream out;
    out << value;
    return out.str();
}

}  // namespace

std::string_view to_string(Scenario s)
{
    return s == Scenario::Los ? "LOS" : "NLOS";
}

Scenario scenario_from_string(std::string_view text)
{
    if (text == "LOS" || text == "los") return Scenario::Los;
    if (text == "NLOS" || text == "nlos") return Scenario::Nlos;
    throw Error("unknown scenario '" + std::string(text) + "' (expected LOS or NLOS)");
}

std::string_view to_string(MaterialCategory c)
{
    switch (c) {
        case MaterialCategory::Wood: return "wood";
        case MaterialCategory::Glass: return "glass";
        case MaterialCategory::Foam: return "foam";
        case MaterialCategory::Concrete: return "concrete";
        case MaterialCategory::Other: break;
    }
    return "other";
}

MaterialCategory category_from_string(std::string_view text)
{
    if (text == "wood") return MaterialCategory::Wood;
    if (text == "glass") return MaterialCategory::Glass;
    if (text == "foam") return MaterialCategory::Foam;
    if (text == "concrete") return MaterialCategory::Concrete;
    if (text == "other") return MaterialCategory::Other;
    throw Error("unknown material category '" + std::string(text) +
                "' (expected wood, glass, foam, concrete or other)");
}

BandPlan BandPlan::default_plan()
{
    BandPlan plan;
    plan.centers_ghz.resize(12);
    for (int i = 0; i < 12; ++i) plan.centers_ghz[i] = 4.5 + 1.0 * i;
    plan.bandwidth_ghz = 1.0;
    plan.points = 256;
    return plan;
}

void BandPlan::validate() const
{
    if (centers_ghz.empty()) throw Error("band plan: no center frequencies");
    if (!(bandwidth_ghz > 0.0)) throw Error("band plan: bandwidth must be positive");
    if (points < 2) throw Error("band plan: needs at least 2 points per segment");
    for (std::size_t i = 0; i < centers_ghz.size(); ++i) {
        if (!(centers_ghz[i] > 0.0)) throw Error("band plan: center frequencies must be positive");
        if (i > 0 && !(centers_ghz[i] > centers_ghz[i - 1]))
            throw Error("band plan: center frequencies must be strictly increasing");
    }
    if (centers_ghz.size() > 2) {
        const double step = centers_ghz[1] - centers_ghz[0];
        for (std::size_t i = 2; i < centers_ghz.size(); ++i) {
            const double s = centers_ghz[i] - centers_ghz[i - 1];
            if (std::abs(s - step) > 1e-9 * std::max(1.0, std::abs(step)))
                throw Error("band plan: center frequencies must be uniformly spaced");
        }
    }
}

int BandPlan::center_index(double freq_ghz) const
{
    const double tol_ghz = step_hz() / 1e9;
    int best = -1;
    double best_dist = tol_ghz;
    for (std::size_t i = 0; i < centers_ghz.size(); ++i) {
        const double dist = std::abs(centers_ghz[i] - freq_ghz);
        if (dist <= best_dist) {
            best = static_cast<int>(i);
            best_dist = dist;
        }
    }
    return best;
}

double SweepSegment::step_hz() const
{
    if (freq_hz.size() < 2) return 0.0;
    return (freq_hz.back() - freq_hz.front()) / static_cast<double>(freq_hz.size() - 1);
}

double SweepSegment::bandwidth_hz() const
{
    return step_hz() * static_cast<double>(freq_hz.size());
}

void MeasurementManifest::validate() const
{
    if (material_name.empty()) throw Error("manifest: material_name is empty");
    if (!(thickness_cm > 0.0)) throw Error("manifest: thickness must be positive");
    if (!(width_cm > 0.0)) throw Error("manifest: width must be positive");
    if (!(height_cm > 0.0)) throw Error("manifest: height must be positive");
    if (repeats < 1) throw Error("manifest: repeats must be at least 1");
    plan.validate();

    for (const auto& ref : segments) {
        if (plan.center_index(ref.center_ghz) < 0)
            throw Error("manifest: segment entry references center " + format_ghz(ref.center_ghz) +
                        " GHz which is not in the plan");
        if (ref.repeat < 0) throw Error("manifest: segment repeat index must be non-negative");
    }
    for (double center : plan.centers_ghz) {
        for (Scenario s : {Scenario::Los, Scenario::Nlos}) {
            if (segments_for(center, s).empty())
                throw Error("manifest: no " + std::string(to_string(s)) +
                            " sweep file listed for center " + format_ghz(center) + " GHz");
        }
    }
}

std::vector<const SegmentRef*> MeasurementManifest::segments_for(double center_ghz,
                                                                 Scenario s) const
{
    std::vector<const SegmentRef*> out;
    for (const auto& ref : segments) {
        if (ref.scenario == s && std::abs(ref.center_ghz - center_ghz) <= 1e-6) {
            out.push_back(&ref);
        }
    }
    return out;
}

std::vector<double> PenetrationLossSeries::frequencies_ghz() const
{
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(p.center_ghz);
    return out;
}

std::vector<double> PenetrationLossSeries::losses_db() const
{
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(p.loss_db);
    return out;
}

void PenetrationLossSeries::validate() const
{
    if (points.empty()) throw Error("series has no points");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!std::isfinite(points[i].loss_db))
            throw Error("series: loss at " + format_ghz(points[i].center_ghz) +
                        " GHz is not finite");
        if (!std::isfinite(points[i].center_ghz))
            throw Error("series: non-finite frequency");
        if (i > 0 && !(points[i].center_ghz > points[i - 1].center_ghz))
            throw Error("series: frequencies must be strictly ascending");
    }
}

}  // namespace penloss
