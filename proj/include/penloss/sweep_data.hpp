#pragma once

#include <complex>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace penloss {

using cplx = std::complex<double>;

/// Base class for all toolkit errors. Validation failures, malformed files
/// and pipeline faults all surface as Error with a human-readable message;
/// no operation ever hands back a partially constructed value.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class Scenario { Los, Nlos };

std::string_view to_string(Scenario s);
Scenario scenario_from_string(std::string_view text);

enum class MaterialCategory { Wood, Glass, Foam, Concrete, Other };

std::string_view to_string(MaterialCategory c);
MaterialCategory category_from_string(std::string_view text);

/// Sweep layout shared by every segment of a measurement: band centers in
/// GHz, per-segment bandwidth in GHz, and the number of frequency points
/// sampled per segment.
///
/// A segment with N points covering bandwidth B uses the grid
/// f_k = center - B/2 + k*B/N, so the frequency step is B/N and the
/// delay resolution after the inverse transform is exactly 1/B.
struct BandPlan {
    std::vector<double> centers_ghz;
    double bandwidth_ghz = 1.0;
    int points = 256;

    /// 12 centers at 4.5, 5.5, ..., 15.5 GHz; 1 GHz bandwidth; 256 points.
    static BandPlan default_plan();

    double step_hz() const { return bandwidth_ghz * 1e9 / static_cast<double>(points); }

    /// Throws unless centers are positive, strictly increasing and uniformly
    /// spaced, bandwidth is positive and points >= 2.
    void validate() const;

    /// Index of the plan center within one grid step of freq_ghz, or -1.
    int center_index(double freq_ghz) const;
};

/// Repeat index carried by an averaged segment.
inline constexpr int kAggregateRepeat = -1;

/// One frequency sweep: complex S21 samples (linear magnitude) on a uniform
/// ascending absolute frequency grid.
struct SweepSegment {
    double center_ghz = 0.0;
    std::vector<double> freq_hz;
    std::vector<cplx> s21;
    int repeat_index = 0;

    double step_hz() const;
    /// Occupied bandwidth N*step; its inverse is the delay resolution.
    double bandwidth_hz() const;
};

struct SegmentRef {
    double center_ghz = 0.0;
    int repeat = 0;
    Scenario scenario = Scenario::Los;
    std::filesystem::path path;
};

/// Material metadata plus the sweep files of one measurement campaign.
struct MeasurementManifest {
    std::string material_name;
    MaterialCategory category = MaterialCategory::Other;
    double thickness_cm = 0.0;
    double width_cm = 0.0;
    double height_cm = 0.0;
    int repeats = 1;
    BandPlan plan;
    std::vector<SegmentRef> segments;

    /// Field-level invariants: positive dimensions, repeats >= 1, valid plan,
    /// and at least one segment per plan center and scenario. Does not touch
    /// the filesystem.
    void validate() const;

    /// Segment entries for one plan center and scenario, in manifest order.
    std::vector<const SegmentRef*> segments_for(double center_ghz, Scenario s) const;
};

struct LossPoint {
    double center_ghz = 0.0;
    double loss_db = 0.0;
};

/// Penetration loss versus band center, one point per plan center.
struct PenetrationLossSeries {
    std::string material_name;
    std::vector<LossPoint> points;

    std::vector<double> frequencies_ghz() const;
    std::vector<double> losses_db() const;

    /// Strictly ascending frequencies, finite losses, at least one point.
    void validate() const;
};

}  // namespace penloss
