#pragma once

#include <span>
#include <string_view>

#include "penloss/sweep_data.hpp"

namespace penloss {

enum class Window { None, Hann };

std::string_view to_string(Window w);
Window window_from_string(std::string_view text);

/// Delay-domain response of one sweep segment.
struct ChannelImpulseResponse {
    double center_ghz = 0.0;
    std::vector<double> delay_ns;  ///< n * delay_resolution_ns, starting at 0
    std::vector<cplx> taps;
    double delay_resolution_ns = 0.0;   ///< 1 / occupied bandwidth
    double unambiguous_range_ns = 0.0;  ///< points * resolution
};

struct FirstArrival {
    double delay_ns = 0.0;
    double power_db = 0.0;  ///< 20*log10 of the tap magnitude
    int tap_index = 0;
};

/// Detection rule for the first arrival. A tap qualifies when its delay lies
/// inside the search window and its power exceeds the noise floor by the
/// threshold. The floor is the mean power of the latest-delay fraction of
/// taps, clamped to no less than dynamic_range_db below the strongest tap so
/// that numerical residue in noiseless traces never counts as signal.
///
/// The 12 dB default threshold keeps the chance of a noise tap beating the
/// true arrival to an earlier delay negligible: Rayleigh noise clears the
/// mean floor by 12 dB with probability exp(-10^1.2) ~ 1e-7 per tap,
/// against ~2e-2 at 6 dB, which corrupts roughly one trace in five.
struct GateConfig {
    double threshold_above_noise_db = 12.0;
    double noise_estimation_fraction = 0.25;
    double search_min_ns = 5.0;
    double search_max_ns = 100.0;
    double dynamic_range_db = 150.0;

    void validate(double unambiguous_range_ns) const;
};

/// Raised when no tap clears the detection gate. Carries the estimated
/// noise floor so callers can report how far the trace was from detection.
class NoDetectableArrival : public Error {
  public:
    NoDetectableArrival(const std::string& what, double noise_floor_db);
    double noise_floor_db() const { return noise_floor_db_; }

  private:
    double noise_floor_db_;
};

/// Element-wise complex mean across repeats of the same sweep, summed in the
/// given order. All inputs must share center frequency and grid. The result
/// carries kAggregateRepeat.
SweepSegment average_repeats(std::span<const SweepSegment> segments);

/// Inverse DFT of the (optionally windowed) sweep, normalized so a flat unit
/// spectrum yields a unit tap at delay zero. The Hann window is divided by
/// its coherent gain, so an on-bin single path keeps its peak level under
/// either window choice.
ChannelImpulseResponse to_cir(const SweepSegment& segment, Window window = Window::None);

/// Smallest-delay tap inside the search window that clears the gate.
FirstArrival first_arrival(const ChannelImpulseResponse& cir, const GateConfig& gate);

/// S_LOS - S_NLOS in dB. Both arrivals must come from sweeps at the same
/// band center; the caller guarantees that.
double penetration_loss(const FirstArrival& los, const FirstArrival& nlos);

/// Per-center kernel: average repeats per scenario, transform, detect the
/// first arrivals, difference the levels.
LossPoint process_center(std::span<const SweepSegment> los,
                         std::span<const SweepSegment> nlos,
                         const GateConfig& gate = {}, Window window = Window::None);

/// Full pipeline over a manifest: one loss point per plan center, assembled
/// in plan order. Repeats are averaged in manifest file order. Any failure
/// is rethrown annotated with the center frequency it occurred at.
PenetrationLossSeries process_manifest(const MeasurementManifest& manifest,
                                       const GateConfig& gate = {},
                                       Window window = Window::None);

}  // namespace penloss
