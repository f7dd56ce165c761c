// Command-line surface for the penetration-loss toolkit:
//   process  manifest -> loss series CSV
//   fit      loss series -> straight-line model JSON
//   compare  two models -> per-frequency differences and RMSE
//   synth    config -> synthetic sweep fixture (manifest + sweep files)
//   report   manifest -> process + fit + compare + markdown summary

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "penloss/cir_pipeline.hpp"
#include "penloss/model_fitting.hpp"
#include "penloss/penetration_models.hpp"
#include "penloss/slab_oracle.hpp"
#include "penloss/sweep_io.hpp"

namespace {

namespace fs = std::filesystem;
using namespace penloss;

// Console output uses 2-decimal dB formatting; files keep full precision.
double round2(double value)
{
    double r = std::round(value * 100.0) / 100.0;
    if (r == 0.0) r = 0.0;  // never print "-0.00"
    return r;
}

std::vector<double> parse_grid(const std::string& text)
{
    double lo = 0.0;
    double step = 0.0;
    double hi = 0.0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &lo, &step, &hi) != 3)
        throw Error("grid must be given as lo:step:hi, got '" + text + "'");
    if (!(step > 0.0)) throw Error("grid step must be positive");
    if (!(lo <= hi)) throw Error("grid must satisfy lo <= hi");
    if ((hi - lo) / step > 1e6) throw Error("grid would have more than 1e6 points");
    std::vector<double> grid;
    for (int k = 0;; ++k) {
        const double f = lo + step * k;
        if (f > hi + step * 1e-9) break;
        grid.push_back(f);
    }
    if (grid.empty()) throw Error("grid is empty");
    return grid;
}

// A model argument is either a model JSON file or a catalog name.
LinearLossModel resolve_model(const std::string& arg)
{
    if (fs::exists(arg)) return read_model(arg);
    if (const auto* model = find_in_catalog(arg)) return *model;
    throw Error("unknown model '" + arg + "': not a file and not a catalog name");
}

struct GateFlags {
    double threshold_db = 12.0;
    double noise_fraction = 0.25;
    double min_ns = 5.0;
    double max_ns = 100.0;
    double dynamic_range_db = 150.0;

    GateConfig to_gate() const
    {
        return {threshold_db, noise_fraction, min_ns, max_ns, dynamic_range_db};
    }
};

void add_gate_flags(CLI::App* cmd, GateFlags& flags, std::string& window)
{
    cmd->add_option("--window", window, "Spectral window: none or hann")
        ->default_val("none");
    cmd->add_option("--gate-threshold-db", flags.threshold_db,
                    "Detection threshold above the noise floor, dB")
        ->default_val(12.0);
    cmd->add_option("--gate-noise-fraction", flags.noise_fraction,
                    "Fraction of latest-delay taps used for the noise floor")
        ->default_val(0.25);
    cmd->add_option("--gate-min-ns", flags.min_ns, "Search window start, ns")->default_val(5.0);
    cmd->add_option("--gate-max-ns", flags.max_ns, "Search window end, ns")->default_val(100.0);
    cmd->add_option("--gate-dynamic-range-db", flags.dynamic_range_db,
                    "Floor clamp below the strongest tap, dB")
        ->default_val(150.0);
}

int run_process(const std::string& manifest_path, const std::string& out_path,
                const GateFlags& gate, const std::string& window)
{
    const MeasurementManifest manifest = read_manifest(manifest_path);
    const PenetrationLossSeries series =
        process_manifest(manifest, gate.to_gate(), window_from_string(window));
    write_loss_series(series, out_path);
    std::printf("wrote %s (%zu points)\n", out_path.c_str(), series.points.size());
    return 0;
}

int run_fit(const std::string& series_path, const std::string& out_path,
            const std::string& residuals_path)
{
    const PenetrationLossSeries series = read_loss_series(series_path);
    const FitResult result = fit_linear(series);
    write_model(result.model, out_path);
    if (!residuals_path.empty()) write_residuals_csv(result, residuals_path);
    std::printf("k=%.2f b=%.2f\n", round2(result.model.slope_db_per_ghz),
                round2(result.model.intercept_db));
    return 0;
}

int run_compare(const std::string& a_arg, const std::string& b_arg, const std::string& grid_text,
                const std::string& out_path, std::string summary_path)
{
    const LinearLossModel a = resolve_model(a_arg);
    const LinearLossModel b = resolve_model(b_arg);
    const std::vector<double> grid =
        grid_text.empty() ? default_comparison_grid() : parse_grid(grid_text);
    const ModelComparison comparison = compare(a, b, grid);

    if (summary_path.empty())
        summary_path = (fs::path(out_path).parent_path() / "summary.json").string();
    write_comparison_csv(comparison, out_path);
    write_comparison_summary(comparison, summary_path);
    std::printf("RMSE %.2f dB\n", round2(comparison.rmse_db));
    return 0;
}

int run_synth(const std::string& config_path, const std::string& out_dir, bool seed_given,
              std::uint64_t seed)
{
    SynthConfig config = read_synth_config(config_path);
    if (seed_given) config.seed = seed;
    const MeasurementManifest manifest = synthesize_manifest(config, out_dir);
    std::printf("wrote manifest and %zu sweep files to %s\n", manifest.segments.size(),
                out_dir.c_str());
    return 0;
}

void write_report_markdown(const fs::path& path, const MeasurementManifest& manifest,
                           const FitResult& fit, const LinearLossModel& reference,
                           const ModelComparison& comparison)
{
    std::ofstream out(path);
    if (!out) throw Error("cannot write report: " + path.string());
    char line[512];

    out << "# Penetration loss report: " << manifest.material_name << "\n\n";
    std::snprintf(line, sizeof(line), "- Material: %s (%s), %.1f cm thick, %.0f x %.0f cm\n",
                  manifest.material_name.c_str(),
                  std::string(to_string(manifest.category)).c_str(), manifest.thickness_cm,
                  manifest.width_cm, manifest.height_cm);
    out << line;
    std::snprintf(line, sizeof(line),
                  "- Bands: %zu centers, %.6g-%.6g GHz, %.6g GHz bandwidth, %d points, %d "
                  "repeats\n",
                  manifest.plan.centers_ghz.size(), manifest.plan.centers_ghz.front(),
                  manifest.plan.centers_ghz.back(), manifest.plan.bandwidth_ghz,
                  manifest.plan.points, manifest.repeats);
    out << line;
    out << "- Files: loss.csv (loss per center), model.json (fitted line), diff.csv and "
           "summary.json (fitted minus reference)\n\n";

    out << "| Model | Slope k (dB/GHz) | Intercept b (dB) | RMSE vs reference (dB) |\n";
    out << "|-------|-----------------:|-----------------:|-----------------------:|\n";
    std::snprintf(line, sizeof(line), "| %s (fitted) | %.2f | %.2f | %.2f |\n",
                  manifest.material_name.c_str(), round2(fit.model.slope_db_per_ghz),
                  round2(fit.model.intercept_db), round2(comparison.rmse_db));
    out << line;
    std::snprintf(line, sizeof(line), "| %s | %.2f | %.2f | |\n", reference.name.c_str(),
                  round2(reference.slope_db_per_ghz), round2(reference.intercept_db));
    out << line;
    out.flush();
    if (!out) throw Error("write failed: " + path.string());
}

int run_report(const std::string& manifest_path, const std::string& reference_name,
               const std::string& out_dir, const GateFlags& gate, const std::string& window)
{
    const fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw Error("cannot create report directory: " + dir.string());

    const LinearLossModel& reference = catalog_entry(reference_name);

    MeasurementManifest manifest;
    PenetrationLossSeries series;
    try {
        manifest = read_manifest(manifest_path);
        const PenetrationLossSeries processed =
            process_manifest(manifest, gate.to_gate(), window_from_string(window));
        write_loss_series(processed, dir / "loss.csv");
        // Fit what a standalone `fit` run would read, so the report equals
        // the composition of the individual commands byte for byte.
        series = read_loss_series(dir / "loss.csv");
    } catch (const std::exception& e) {
        throw Error(std::string("process stage: ") + e.what());
    }

    FitResult fit;
    try {
        fit = fit_linear(series);
        write_model(fit.model, dir / "model.json");
    } catch (const std::exception& e) {
        throw Error(std::string("fit stage: ") + e.what());
    }

    ModelComparison comparison;
    try {
        comparison = compare(fit.model, reference, series.frequencies_ghz());
        write_comparison_csv(comparison, dir / "diff.csv");
        write_comparison_summary(comparison, dir / "summary.json");
        write_report_markdown(dir / "summary.md", manifest, fit, reference, comparison);
    } catch (const std::exception& e) {
        throw Error(std::string("compare stage: ") + e.what());
    }

    std::printf("k=%.2f b=%.2f\n", round2(fit.model.slope_db_per_ghz),
                round2(fit.model.intercept_db));
    std::printf("RMSE %.2f dB\n", round2(comparison.rmse_db));
    std::printf("report written to %s\n", dir.string().c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Material penetration-loss measurement toolkit"};
    app.require_subcommand(1);

    std::string manifest_path;
    std::string series_path;
    std::string out_path;
    std::string residuals_path;
    std::string summary_path;
    std::string grid_text;
    std::string config_path;
    std::string reference_name;
    std::string model_a;
    std::string model_b;
    std::string window = "none";
    GateFlags gate;
    std::uint64_t seed = 0;

    CLI::App* process_cmd =
        app.add_subcommand("process", "Compute a penetration-loss series from a manifest");
    process_cmd->add_option("--manifest", manifest_path, "Measurement manifest JSON")
        ->required()
        ->check(CLI::ExistingFile);
    process_cmd->add_option("--out", out_path, "Output loss-series CSV")->required();
    add_gate_flags(process_cmd, gate, window);

    CLI::App* fit_cmd =
        app.add_subcommand("fit", "Fit a straight line to a penetration-loss series");
    fit_cmd->add_option("--series", series_path, "Loss-series CSV")
        ->required()
        ->check(CLI::ExistingFile);
    fit_cmd->add_option("--out", out_path, "Output model JSON")->required();
    fit_cmd->add_option("--residuals", residuals_path, "Optional residuals CSV");

    CLI::App* compare_cmd =
        app.add_subcommand("compare", "Difference two models over a frequency grid");
    compare_cmd->add_option("model_a", model_a, "Model JSON file or catalog name")->required();
    compare_cmd->add_option("model_b", model_b, "Model JSON file or catalog name")->required();
    compare_cmd->add_option("--grid", grid_text,
                            "Evaluation grid lo:step:hi in GHz (default: 4.5:1:15.5)");
    compare_cmd->add_option("--out", out_path, "Output difference CSV")->default_val("diff.csv");
    compare_cmd->add_option("--summary", summary_path,
                            "Output summary JSON (default: summary.json next to --out)");

    CLI::App* synth_cmd =
        app.add_subcommand("synth", "Generate a synthetic sweep fixture from a config");
    synth_cmd->add_option("--config", config_path, "Synthesis config JSON")
        ->required()
        ->check(CLI::ExistingFile);
    synth_cmd->add_option("--out", out_path, "Output directory")->required();
    CLI::Option* seed_opt =
        synth_cmd->add_option("--seed", seed, "Override the config's random seed");

    CLI::App* report_cmd =
        app.add_subcommand("report", "Process, fit and compare in one run");
    report_cmd->add_option("--manifest", manifest_path, "Measurement manifest JSON")
        ->required()
        ->check(CLI::ExistingFile);
    report_cmd->add_option("--reference", reference_name, "Catalog model to compare against")
        ->required();
    report_cmd->add_option("--out", out_path, "Output directory")->required();
    add_gate_flags(report_cmd, gate, window);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*process_cmd) return run_process(manifest_path, out_path, gate, window);
        if (*fit_cmd) return run_fit(series_path, out_path, residuals_path);
        if (*compare_cmd)
            return run_compare(model_a, model_b, grid_text, out_path, summary_path);
        if (*synth_cmd) return run_synth(config_path, out_path, seed_opt->count() > 0, seed);
        if (*report_cmd)
            return run_report(manifest_path, reference_name, out_path, gate, window);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
