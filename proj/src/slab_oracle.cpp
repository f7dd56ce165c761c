#include "penloss/slab_oracle.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "penloss/sweep_io.hpp"

namespace penloss {

namespace {

constexpr double kSpeedOfLight = 299792458.0;     // m/s
constexpr double kFreeSpaceImpedance = 376.730313668;  // ohm
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Abcd {
    cplx a{1.0, 0.0};
    cplx b{0.0, 0.0};
    cplx c{0.0, 0.0};
    cplx d{1.0, 0.0};
};

// Cascade of the per-layer two-port matrices. eps_c = eps' (1 - j tan d);
// the principal square root puts the attenuation in Re(gamma) >= 0.
Abcd cascade(const SlabStack& stack, double f_hz)
{
    Abcd m;
    for (const Layer& layer : stack.layers) {
        const cplx eps_c =
            layer.rel_permittivity * cplx{1.0, -layer.loss_tangent};
        const cplx root = std::sqrt(eps_c);
        const cplx gamma = cplx{0.0, kTwoPi * f_hz / kSpeedOfLight} * root;
        const cplx eta = kFreeSpaceImpedance / root;
        const cplx gd = gamma * layer.thickness_m;
        const cplx ch = std::cosh(gd);
        const cplx sh = std::sinh(gd);

        const Abcd l{ch, eta * sh, sh / eta, ch};
        m = Abcd{m.a * l.a + m.b * l.c, m.a * l.b + m.b * l.d,
                 m.c * l.a + m.d * l.c, m.c * l.b + m.d * l.d};
    }
    return m;
}

cplx denominator(const Abcd& m)
{
    return m.a + m.b / kFreeSpaceImpedance + m.c * kFreeSpaceImpedance + m.d;
}

std::uint64_t splitmix64(std::uint64_t& state)
{
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Deterministic standard complex-Gaussian stream (E|n|^2 = 1) with an
// independent substream per (seed, center, repeat, scenario). Identical
// across toolchains, so fixture files are bit-reproducible.
class NoiseStream {
  public:
    NoiseStream(std::uint64_t seed, std::uint64_t center, std::uint64_t repeat,
                std::uint64_t scenario)
        : state_(seed)
    {
        splitmix64(state_);
        state_ ^= 0x53A0C6F1D3B7E925ULL * (center + 1);
        splitmix64(state_);
        state_ ^= 0xA24BAED4963EE407ULL * (repeat + 1);
        splitmix64(state_);
        state_ ^= 0x9FB21C651E98DF25ULL * (scenario + 1);
        splitmix64(state_);
    }

    cplx next()
    {
        const double u1 = uniform01();
        const double u2 = uniform01();
        return std::polar(std::sqrt(-std::log(u1)), kTwoPi * u2);
    }

  private:
    // (0, 1]: log stays finite
    double uniform01()
    {
        return (static_cast<double>(splitmix64(state_) >> 11) + 1.0) * 0x1.0p-53;
    }

    std::uint64_t state_;
};

template <typename T>
T get_field(const nlohmann::json& j, const char* name, const std::string& context)
{
    if (!j.contains(name)) throw Error(context + ": missing field '" + name + "'");
    try {
        return j.at(name).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw Error(context + ": field '" + name + "' has the wrong type");
    }
}

}  // namespace

void SlabStack::validate() const
{
    if (layers.empty()) throw Error("slab stack: no layers");
    for (const Layer& layer : layers) {
        if (!(layer.rel_permittivity >= 1.0))
            throw Error("slab stack: relative permittivity must be >= 1");
        if (!(layer.loss_tangent >= 0.0))
            throw Error("slab stack: loss tangent must be >= 0");
        if (!(layer.thickness_m > 0.0))
            throw Error("slab stack: layer thickness must be positive");
    }
}

cplx transmission(const SlabStack& stack, double f_hz)
{
    if (!(f_hz > 0.0)) throw Error("transmission: frequency must be positive");
    return 2.0 / denominator(cascade(stack, f_hz));
}

cplx reflection(const SlabStack& stack, double f_hz)
{
    if (!(f_hz > 0.0)) throw Error("reflection: frequency must be positive");
    const Abcd m = cascade(stack, f_hz);
    return (m.a + m.b / kFreeSpaceImpedance - m.c * kFreeSpaceImpedance - m.d) /
           denominator(m);
}

double transmission_loss_db(const SlabStack& stack, double f_hz)
{
    return -20.0 * std::log10(std::abs(transmission(stack, f_hz)));
}

PenetrationLossSeries loss_spectrum(const SlabStack& stack, const BandPlan& plan,
                                    std::string material_name)
{
    plan.validate();
    PenetrationLossSeries series;
    series.material_name = std::move(material_name);
    series.points.reserve(plan.centers_ghz.size());
    for (double center : plan.centers_ghz)
        series.points.push_back({center, transmission_loss_db(stack, center * 1e9)});
    return series;
}

Layer preset_layer(MaterialCategory category, double thickness_m)
{
    switch (category) {
        case MaterialCategory::Wood: return {2.0, 0.05, thickness_m};
        case MaterialCategory::Glass: return {6.0, 0.02, thickness_m};
        case MaterialCategory::Concrete: return {5.3, 0.15, thickness_m};
        case MaterialCategory::Foam: return {1.1, 0.002, thickness_m};
        case MaterialCategory::Other: break;
    }
    throw Error("no preset layer for category 'other'");
}

void SynthConfig::validate() const
{
    plan.validate();
    if (material_name.empty()) throw Error("synth config: material_name is empty");
    if (!(thickness_cm > 0.0 && width_cm > 0.0 && height_cm > 0.0))
        throw Error("synth config: material dimensions must be positive");
    if (repeats < 1) throw Error("synth config: repeats must be at least 1");

    if (const auto* stack = std::get_if<SlabStack>(&target)) {
        stack->validate();
    } else {
        std::get<LinearLossModel>(target).validate();
    }

    const double range_ns = static_cast<double>(plan.points) / plan.bandwidth_ghz;
    if (!(los_delay_ns > 0.0 && los_delay_ns < range_ns))
        throw Error("synth config: los_delay_ns must lie inside the unambiguous delay range");
    for (const EchoPath& path : extra_paths) {
        if (!(path.delay_ns > 0.0 && path.delay_ns < range_ns))
            throw Error("synth config: extra path delay must lie inside the unambiguous range");
        if (!(path.amplitude >= 0.0 && path.amplitude < 1.0))
            throw Error("synth config: extra path amplitudes must lie in [0, 1)");
    }
    if (snr_db && !std::isfinite(*snr_db))
        throw Error("synth config: snr_db must be finite");
}

SweepSegment synth_segment(const SynthConfig& config, std::size_t center_index, int repeat,
                           Scenario scenario)
{
    config.validate();
    if (center_index >= config.plan.centers_ghz.size())
        throw Error("synth: center index out of range");
    if (repeat < 0) throw Error("synth: repeat index must be non-negative");

    const double center_ghz = config.plan.centers_ghz[center_index];
    const double start_hz = center_ghz * 1e9 - 0.5 * config.plan.bandwidth_ghz * 1e9;
    const double step = config.plan.step_hz();
    const int n = config.plan.points;

    SweepSegment segment;
    segment.center_ghz = center_ghz;
    segment.repeat_index = repeat;
    segment.freq_hz.resize(n);
    segment.s21.resize(n);

    double mean_power = 0.0;
    for (int k = 0; k < n; ++k) {
        const double f = start_hz + step * static_cast<double>(k);
        segment.freq_hz[k] = f;
        cplx d = std::polar(1.0, -kTwoPi * f * config.los_delay_ns * 1e-9);
        for (const EchoPath& path : config.extra_paths)
            d += path.amplitude * std::polar(1.0, -kTwoPi * f * path.delay_ns * 1e-9);
        segment.s21[k] = d;
        mean_power += std::norm(d);
    }
    mean_power /= static_cast<double>(n);

    if (scenario == Scenario::Nlos) {
        // The material gain is sampled at the band center and applied as a
        // real factor. The direct arrival stays on its delay bin and a
        // noiseless fixture processes back to the target loss exactly; a
        // frequency-varying in-band gain would instead smear leading-edge
        // skirts that a smallest-delay detector picks up.
        double gain = 0.0;
        if (const auto* stack = std::get_if<SlabStack>(&config.target)) {
            gain = std::abs(transmission(*stack, center_ghz * 1e9));
        } else {
            const auto& model = std::get<LinearLossModel>(config.target);
            gain = std::pow(10.0, -model.line(center_ghz) / 20.0);
        }
        for (auto& v : segment.s21) v *= gain;
    }

    if (config.snr_db) {
        const double sigma =
            std::sqrt(mean_power * std::pow(10.0, -*config.snr_db / 10.0));
        NoiseStream noise(config.seed, center_index, static_cast<std::uint64_t>(repeat),
                          scenario == Scenario::Los ? 0 : 1);
        for (auto& v : segment.s21) v += sigma * noise.next();
    }
    return segment;
}

MeasurementManifest synthesize_manifest(const SynthConfig& config,
                                        const std::filesystem::path& out_dir)
{
    config.validate();
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec || !std::filesystem::is_directory(out_dir))
        throw Error("cannot create output directory: " + out_dir.string());
    const std::filesystem::path dir = std::filesystem::absolute(out_dir);

    MeasurementManifest manifest;
    manifest.material_name = config.material_name;
    manifest.category = config.category;
    manifest.thickness_cm = config.thickness_cm;
    manifest.width_cm = config.width_cm;
    manifest.height_cm = config.height_cm;
    manifest.repeats = config.repeats;
    manifest.plan = config.plan;

    for (std::size_t ci = 0; ci < config.plan.centers_ghz.size(); ++ci) {
        const double center = config.plan.centers_ghz[ci];
        for (Scenario scenario : {Scenario::Los, Scenario::Nlos}) {
            for (int rep = 0; rep < config.repeats; ++rep) {
                const SweepSegment segment = synth_segment(config, ci, rep, scenario);
                char name[128];
                std::snprintf(name, sizeof(name), "%s_%.10gghz_r%d.csv",
                              scenario == Scenario::Los ? "los" : "nlos", center, rep);
                const std::filesystem::path file = dir / name;
                write_sweep_segment(segment, file);
                manifest.segments.push_back({center, rep, scenario, file});
            }
        }
    }
    write_manifest(manifest, dir / "manifest.json");
    return manifest;
}

SynthConfig read_synth_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error("cannot open synth config: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error("synth config " + path.string() + ": invalid JSON: " + e.what());
    }
    const std::string ctx = "synth config " + path.string();

    SynthConfig config;
    config.material_name = get_field<std::string>(j, "material_name", ctx);
    if (j.contains("category"))
        config.category = category_from_string(get_field<std::string>(j, "category", ctx));
    if (j.contains("thickness_cm")) config.thickness_cm = get_field<double>(j, "thickness_cm", ctx);
    if (j.contains("width_cm")) config.width_cm = get_field<double>(j, "width_cm", ctx);
    if (j.contains("height_cm")) config.height_cm = get_field<double>(j, "height_cm", ctx);

    if (j.contains("plan")) {
        const nlohmann::json& jp = j.at("plan");
        config.plan.centers_ghz = get_field<std::vector<double>>(jp, "centers_ghz", ctx);
        config.plan.bandwidth_ghz = get_field<double>(jp, "bandwidth_ghz", ctx);
        config.plan.points = get_field<int>(jp, "points", ctx);
    }

    const bool has_stack = j.contains("stack");
    const bool has_model = j.contains("model");
    if (has_stack == has_model)
        throw Error(ctx + ": exactly one of 'stack' or 'model' must be given");
    if (has_stack) {
        SlabStack stack;
        if (!j.at("stack").is_array()) throw Error(ctx + ": 'stack' must be an array of layers");
        for (const auto& jl : j.at("stack")) {
            Layer layer;
            layer.rel_permittivity = get_field<double>(jl, "rel_permittivity", ctx);
            layer.loss_tangent = get_field<double>(jl, "loss_tangent", ctx);
            layer.thickness_m = get_field<double>(jl, "thickness_m", ctx);
            stack.layers.push_back(layer);
        }
        config.target = std::move(stack);
    } else {
        const nlohmann::json& jm = j.at("model");
        if (jm.is_string()) {
            config.target = catalog_entry(jm.get<std::string>());
        } else {
            LinearLossModel model;
            model.name = jm.contains("name") ? get_field<std::string>(jm, "name", ctx)
                                             : config.material_name;
            model.slope_db_per_ghz = get_field<double>(jm, "slope_db_per_ghz", ctx);
            model.intercept_db = get_field<double>(jm, "intercept_db", ctx);
            model.range_lo_ghz =
                config.plan.centers_ghz.front() - 0.5 * config.plan.bandwidth_ghz;
            model.range_hi_ghz =
                config.plan.centers_ghz.back() + 0.5 * config.plan.bandwidth_ghz;
            config.target = std::move(model);
        }
    }

    if (j.contains("los_delay_ns")) config.los_delay_ns = get_field<double>(j, "los_delay_ns", ctx);
    if (j.contains("extra_paths")) {
        for (const auto& je : j.at("extra_paths")) {
            EchoPath path;
            path.delay_ns = get_field<double>(je, "delay_ns", ctx);
            path.amplitude = get_field<double>(je, "amplitude", ctx);
            config.extra_paths.push_back(path);
        }
    }
    if (j.contains("snr_db") && !j.at("snr_db").is_null())
        config.snr_db = get_field<double>(j, "snr_db", ctx);
    if (j.contains("repeats")) config.repeats = get_field<int>(j, "repeats", ctx);
    if (j.contains("seed")) config.seed = get_field<std::uint64_t>(j, "seed", ctx);

    config.validate();
    return config;
}

}  // namespace penloss
