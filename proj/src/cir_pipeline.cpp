#include "penloss/cir_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "penloss/dft.hpp"
#include "penloss/sweep_io.hpp"

namespace penloss {

std::string_view to_string(Window w)
{
    return w == Window::None ? "none" : "hann";
}

Window window_from_string(std::string_view text)
{
    if (text == "none") return Window::None;
    if (text == "hann") return Window::Hann;
    throw Error("unknown window '" + std::string(text) + "' (expected none or hann)");
}

NoDetectableArrival::NoDetectableArrival(const std::string& what, double noise_floor_db)
    : Error(what), noise_floor_db_(noise_floor_db)
{
}

void GateConfig::validate(double unambiguous_range_ns) const
{
    if (!(threshold_above_noise_db > 0.0)) throw Error("gate: threshold must be positive");
    if (!(noise_estimation_fraction > 0.0 && noise_estimation_fraction < 0.5))
        throw Error("gate: noise estimation fraction must lie in (0, 0.5)");
    if (!(search_min_ns >= 0.0 && search_min_ns < search_max_ns))
        throw Error("gate: search window must satisfy 0 <= min < max");
    if (search_max_ns > unambiguous_range_ns + 1e-9)
        throw Error("gate: search window exceeds the unambiguous delay range");
    if (!(dynamic_range_db > threshold_above_noise_db))
        throw Error("gate: dynamic range must exceed the detection threshold");
}

SweepSegment average_repeats(std::span<const SweepSegment> segments)
{
    if (segments.empty()) throw Error("average: no segments to average");
    const SweepSegment& first = segments.front();
    const std::size_t n = first.s21.size();
    if (n == 0 || first.freq_hz.size() != n) throw Error("average: malformed segment");

    const double grid_tol = std::max(first.step_hz() * 1e-6, 1e-3);
    for (const auto& seg : segments) {
        if (std::abs(seg.center_ghz - first.center_ghz) > 1e-9) {
            std::ostringstream msg;
            msg << "average: mixed band centers (" << seg.center_ghz << " vs "
                << first.center_ghz << " GHz)";
            throw Error(msg.str());
        }
        if (seg.s21.size() != n || seg.freq_hz.size() != n)
            throw Error("average: mismatched sample counts between repeats");
        for (std::size_t k = 0; k < n; ++k) {
            if (std::abs(seg.freq_hz[k] - first.freq_hz[k]) > grid_tol)
                throw Error("average: mismatched frequency grids between repeats");
        }
    }

    SweepSegment out;
    out.center_ghz = first.center_ghz;
    out.freq_hz = first.freq_hz;
    out.repeat_index = kAggregateRepeat;
    out.s21.assign(n, cplx{0.0, 0.0});
    for (const auto& seg : segments) {
        for (std::size_t k = 0; k < n; ++k) out.s21[k] += seg.s21[k];
    }
    const double scale = 1.0 / static_cast<double>(segments.size());
    for (auto& v : out.s21) v *= scale;
    return out;
}

ChannelImpulseResponse to_cir(const SweepSegment& segment, Window window)
{
    const std::size_t n = segment.s21.size();
    if (n < 2 || segment.freq_hz.size() != n) throw Error("cir: malformed segment");

    std::vector<cplx> spectrum(segment.s21.begin(), segment.s21.end());
    if (window == Window::Hann) {
        // Periodic Hann divided by its coherent gain (exactly 1/2), so an
        // on-bin path keeps its peak tap level.
        double gain = 0.0;
        std::vector<double> w(n);
        for (std::size_t k = 0; k < n; ++k) {
            w[k] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(k) /
                                         static_cast<double>(n)));
            gain += w[k];
        }
        gain /= static_cast<double>(n);
        for (std::size_t k = 0; k < n; ++k) spectrum[k] *= w[k] / gain;
    }

    ChannelImpulseResponse cir;
    cir.center_ghz = segment.center_ghz;
    cir.taps = dft_inverse(spectrum);
    cir.delay_resolution_ns = 1e9 / segment.bandwidth_hz();
    cir.unambiguous_range_ns = cir.delay_resolution_ns * static_cast<double>(n);
    cir.delay_ns.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        cir.delay_ns[i] = cir.delay_resolution_ns * static_cast<double>(i);
    return cir;
}

FirstArrival first_arrival(const ChannelImpulseResponse& cir, const GateConfig& gate)
{
    const std::size_t n = cir.taps.size();
    if (n == 0) throw Error("first arrival: empty impulse response");
    gate.validate(cir.unambiguous_range_ns);

    auto noise_taps = static_cast<std::size_t>(
        std::llround(gate.noise_estimation_fraction * static_cast<double>(n)));
    noise_taps = std::clamp<std::size_t>(noise_taps, 1, n);
    double noise_power = 0.0;
    for (std::size_t i = n - noise_taps; i < n; ++i) noise_power += std::norm(cir.taps[i]);
    noise_power /= static_cast<double>(noise_taps);

    // Clamp the floor for (near-)noiseless traces: transform residue sits
    // 250+ dB below the peak and must not register as arrivals.
    double peak_power = 0.0;
    for (const cplx& tap : cir.taps) peak_power = std::max(peak_power, std::norm(tap));
    noise_power =
        std::max(noise_power, peak_power * std::pow(10.0, -gate.dynamic_range_db / 10.0));

    const double gate_power =
        noise_power * std::pow(10.0, gate.threshold_above_noise_db / 10.0);

    for (std::size_t i = 0; i < n; ++i) {
        const double delay = cir.delay_ns[i];
        if (delay < gate.search_min_ns - 1e-12 || delay > gate.search_max_ns + 1e-12) continue;
        const double power = std::norm(cir.taps[i]);
        if (power > gate_power) {
            return {delay, 10.0 * std::log10(power), static_cast<int>(i)};
        }
    }

    const double floor_db = noise_power > 0.0 ? 10.0 * std::log10(noise_power)
                                              : -std::numeric_limits<double>::infinity();
    std::ostringstream msg;
    msg << "no detectable arrival: no tap within " << gate.search_min_ns << "-"
        << gate.search_max_ns << " ns exceeds the noise floor (" << floor_db << " dB) by "
        << gate.threshold_above_noise_db << " dB";
    throw NoDetectableArrival(msg.str(), floor_db);
}

double penetration_loss(const FirstArrival& los, const FirstArrival& nlos)
{
    return los.power_db - nlos.power_db;
}

LossPoint process_center(std::span<const SweepSegment> los, std::span<const SweepSegment> nlos,
                         const GateConfig& gate, Window window)
{
    const SweepSegment los_mean = average_repeats(los);
    const SweepSegment nlos_mean = average_repeats(nlos);
    if (std::abs(los_mean.center_ghz - nlos_mean.center_ghz) > 1e-9)
        throw Error("process: LOS and NLOS sweeps are from different band centers");

    const FirstArrival los_arrival = first_arrival(to_cir(los_mean, window), gate);
    const FirstArrival nlos_arrival = first_arrival(to_cir(nlos_mean, window), gate);
    return {los_mean.center_ghz, penetration_loss(los_arrival, nlos_arrival)};
}

PenetrationLossSeries process_manifest(const MeasurementManifest& manifest,
                                       const GateConfig& gate, Window window)
{
    manifest.validate();

    PenetrationLossSeries series;
    series.material_name = manifest.material_name;
    series.points.reserve(manifest.plan.centers_ghz.size());

    for (double center : manifest.plan.centers_ghz) {
        try {
            std::vector<SweepSegment> los;
            std::vector<SweepSegment> nlos;
            for (Scenario scenario : {Scenario::Los, Scenario::Nlos}) {
                auto& bucket = scenario == Scenario::Los ? los : nlos;
                for (const SegmentRef* ref : manifest.segments_for(center, scenario)) {
                    SweepSegment segment = read_sweep_segment(ref->path, manifest.plan);
                    segment.repeat_index = ref->repeat;
                    if (std::abs(segment.center_ghz - center) > 1e-6)
                        throw Error("sweep file " + ref->path.string() +
                                    " does not cover the center it is listed under");
                    bucket.push_back(std::move(segment));
                }
            }
            series.points.push_back(process_center(los, nlos, gate, window));
        } catch (const std::exception& e) {
            std::ostringstream msg;
            msg << "center " << center << " GHz: " << e.what();
            throw Error(msg.str());
        }
    }
    return series;
}

}  // namespace penloss
