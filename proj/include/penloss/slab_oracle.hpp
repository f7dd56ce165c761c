#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <variant>
#include <vector>

#include "penloss/penetration_models.hpp"
#include "penloss/sweep_data.hpp"

namespace penloss {

/// One homogeneous lossy-dielectric layer, non-magnetic. Complex relative
/// permittivity eps' * (1 - j*tan(delta)).
struct Layer {
    double rel_permittivity = 1.0;  ///< >= 1
    double loss_tangent = 0.0;      ///< >= 0
    double thickness_m = 0.0;       ///< > 0
};

/// Ordered layers with free space implied on both exterior sides.
struct SlabStack {
    std::vector<Layer> layers;

    void validate() const;
};

/// Complex transmission coefficient at normal incidence from the cascaded
/// per-layer two-port matrices
///   [ cosh(g d)      eta sinh(g d) ]
///   [ sinh(g d)/eta  cosh(g d)     ]
/// with g = j (2 pi f / c) sqrt(eps_c) and eta = eta0 / sqrt(eps_c);
/// t = 2 / (A + B/eta0 + C eta0 + D).
cplx transmission(const SlabStack& stack, double f_hz);

/// Reflection coefficient from the same cascade.
cplx reflection(const SlabStack& stack, double f_hz);

/// Material loss -20*log10|t| in dB.
double transmission_loss_db(const SlabStack& stack, double f_hz);

/// Loss at every plan center.
PenetrationLossSeries loss_spectrum(const SlabStack& stack, const BandPlan& plan,
                                    std::string material_name = "slab");

/// Fixture presets (convenience values, tunable via config):
/// wood 2.0/0.05, glass 6.0/0.02, concrete 5.3/0.15, foam 1.1/0.002.
Layer preset_layer(MaterialCategory category, double thickness_m);

struct EchoPath {
    double delay_ns = 0.0;
    double amplitude = 0.0;  ///< relative to the direct path, in [0, 1)
};

/// Recipe for a synthetic measurement: either a physical slab stack or a
/// target straight-line model, plus geometry, multipath, noise and repeat
/// settings.
///
/// LOS sweeps are sum-of-paths spectra with the direct path at los_delay_ns
/// and unit amplitude. NLOS sweeps apply the material gain to the same clean
/// spectrum as a real per-band factor sampled at the band center: |t| for a
/// stack, 10^(-PL/20) for a line target. The direct arrival therefore stays
/// on its delay bin and a noiseless fixture processes back to the target
/// loss exactly. Noise is complex white Gaussian per frequency point with
/// SNR referenced to the clean LOS sample power, seeded per
/// (seed, center, repeat, scenario).
struct SynthConfig {
    std::string material_name = "synthetic";
    MaterialCategory category = MaterialCategory::Other;
    double thickness_cm = 1.0;
    double width_cm = 100.0;
    double height_cm = 100.0;
    BandPlan plan = BandPlan::default_plan();
    std::variant<SlabStack, LinearLossModel> target;
    double los_delay_ns = 16.0;
    std::vector<EchoPath> extra_paths;
    std::optional<double> snr_db;  ///< absent = noiseless
    int repeats = 10;
    std::uint64_t seed = 0;

    void validate() const;
};

SynthConfig read_synth_config(const std::filesystem::path& path);

/// One synthetic sweep, generated in memory. Deterministic: any segment can
/// be produced independently and reruns are bit-identical for a fixed seed.
SweepSegment synth_segment(const SynthConfig& config, std::size_t center_index,
                           int repeat, Scenario scenario);

/// Writes every sweep file plus manifest.json into out_dir and returns the
/// manifest (segment paths resolved into out_dir).
MeasurementManifest synthesize_manifest(const SynthConfig& config,
                                        const std::filesystem::path& out_dir);

}  // namespace penloss
