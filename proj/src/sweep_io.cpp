#include "penloss/sweep_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace penloss {

namespace {

void strip_cr(std::string& line)
{
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::vector<std::string> split_fields(const std::string& line)
{
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

double parse_double(const std::string& text, const std::filesystem::path& file,
                    std::size_t line_no, const char* column)
{
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, rc] = std::from_chars(first, last, value);
    if (rc != std::errc{} || ptr != last) {
        std::ostringstream msg;
        msg << file.string() << " row " << line_no << ": bad numeric value '" << text
            << "' in column " << column;
        throw Error(msg.str());
    }
    return value;
}

class LineWriter {
  public:
    explicit LineWriter(const std::filesystem::path& path) : path_(path), out_(path)
    {
        if (!out_) throw Error("cannot write file: " + path.string());
    }

    void printf(const char* format, auto... args)
    {
        char buffer[256];
        std::snprintf(buffer, sizeof(buffer), format, args...);
        out_ << buffer;
    }

    void line(const std::string& text) { out_ << text << '\n'; }

    void close()
    {
        out_.flush();
        if (!out_) throw Error("write failed: " + path_.string());
    }

  private:
    std::filesystem::path path_;
    std::ofstream out_;
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

nlohmann::json load_json(const std::filesystem::path& path, const std::string& context)
{
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + context + ": " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(context + " " + path.string() + ": invalid JSON: " + e.what());
    }
    return j;
}

void dump_json(const nlohmann::json& j, const std::filesystem::path& path,
               const std::string& context)
{
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + context + ": " + path.string());
    out << j.dump(2) << '\n';
    out.flush();
    if (!out) throw Error("write failed: " + path.string());
}

constexpr char kSegmentHeader[] = "freq_hz,s21_re,s21_im";
constexpr char kSeriesHeader[] = "center_freq_ghz,pl_db";

}  // namespace

SweepSegment read_sweep_segment(const std::filesystem::path& path, const BandPlan& plan)
{
    plan.validate();
    std::ifstream in(path);
    if (!in) throw Error("cannot open sweep file: " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw Error(path.string() + ": empty file");
    strip_cr(line);
    if (line != kSegmentHeader)
        throw Error(path.string() + ": bad header '" + line + "' (expected " + kSegmentHeader +
                    ")");

    SweepSegment segment;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != 3) {
            std::ostringstream msg;
            msg << path.string() << " row " << line_no << ": expected 3 fields, got "
                << fields.size();
            throw Error(msg.str());
        }
        segment.freq_hz.push_back(parse_double(fields[0], path, line_no, "freq_hz"));
        segment.s21.emplace_back(parse_double(fields[1], path, line_no, "s21_re"),
                                 parse_double(fields[2], path, line_no, "s21_im"));
    }

    const std::size_t n = segment.freq_hz.size();
    if (n != static_cast<std::size_t>(plan.points)) {
        std::ostringstream msg;
        msg << path.string() << ": point count " << n << " != " << plan.points;
        throw Error(msg.str());
    }

    for (std::size_t i = 1; i < n; ++i) {
        if (!(segment.freq_hz[i] > segment.freq_hz[i - 1])) {
            std::ostringstream msg;
            msg << path.string() << " row " << i + 2
                << ": duplicate or non-ascending frequency (non-uniform grid)";
            throw Error(msg.str());
        }
    }
    const double mean_step = segment.step_hz();
    for (std::size_t i = 1; i < n; ++i) {
        const double step = segment.freq_hz[i] - segment.freq_hz[i - 1];
        if (std::abs(step - mean_step) > 1e-6 * mean_step) {
            std::ostringstream msg;
            msg << path.string() << " row " << i + 2 << ": non-uniform frequency grid (step "
                << step << " Hz, expected " << mean_step << " Hz)";
            throw Error(msg.str());
        }
    }

    const double bandwidth_hz = plan.bandwidth_ghz * 1e9;
    if (std::abs(segment.bandwidth_hz() - bandwidth_hz) > 1e-6 * bandwidth_hz) {
        std::ostringstream msg;
        msg << path.string() << ": grid bandwidth " << segment.bandwidth_hz() / 1e9
            << " GHz does not match the plan bandwidth " << plan.bandwidth_ghz << " GHz";
        throw Error(msg.str());
    }

    const double mid_ghz = 0.5 * (segment.freq_hz.front() + segment.freq_hz.back()) / 1e9;
    const int index = plan.center_index(mid_ghz);
    if (index < 0) {
        std::ostringstream msg;
        msg << path.string() << ": grid midpoint " << mid_ghz
            << " GHz does not match any plan center";
        throw Error(msg.str());
    }
    segment.center_ghz = plan.centers_ghz[static_cast<std::size_t>(index)];
    return segment;
}

void write_sweep_segment(const SweepSegment& segment, const std::filesystem::path& path)
{
    const std::size_t n = segment.s21.size();
    if (n == 0 || segment.freq_hz.size() != n)
        throw Error("segment has no samples or mismatched grid");

    LineWriter out(path);
    out.line(kSegmentHeader);
    for (std::size_t i = 0; i < n; ++i) {
        out.printf("%.3f,%.12e,%.12e\n", segment.freq_hz[i], segment.s21[i].real(),
                   segment.s21[i].imag());
    }
    out.close();
}

MeasurementManifest read_manifest(const std::filesystem::path& path)
{
    const std::string ctx = "manifest";
    const nlohmann::json j = load_json(path, ctx);

    MeasurementManifest manifest;
    manifest.material_name = get_field<std::string>(j, "material_name", ctx);
    manifest.category = category_from_string(get_field<std::string>(j, "category", ctx));
    manifest.thickness_cm = get_field<double>(j, "thickness_cm", ctx);
    manifest.width_cm = get_field<double>(j, "width_cm", ctx);
    manifest.height_cm = get_field<double>(j, "height_cm", ctx);
    manifest.repeats = get_field<int>(j, "repeats", ctx);

    if (!j.contains("plan")) throw Error(ctx + ": missing field 'plan'");
    const nlohmann::json& jp = j.at("plan");
    manifest.plan.centers_ghz = get_field<std::vector<double>>(jp, "centers_ghz", ctx + " plan");
    manifest.plan.bandwidth_ghz = get_field<double>(jp, "bandwidth_ghz", ctx + " plan");
    manifest.plan.points = get_field<int>(jp, "points", ctx + " plan");

    if (!j.contains("segments")) throw Error(ctx + ": missing field 'segments'");
    const std::filesystem::path base = std::filesystem::absolute(path).parent_path();
    for (const auto& js : j.at("segments")) {
        SegmentRef ref;
        ref.center_ghz = get_field<double>(js, "center_ghz", ctx + " segment");
        ref.repeat = get_field<int>(js, "repeat", ctx + " segment");
        ref.scenario = scenario_from_string(get_field<std::string>(js, "scenario", ctx + " segment"));
        const std::filesystem::path entry = get_field<std::string>(js, "path", ctx + " segment");
        ref.path = entry.is_absolute() ? entry : base / entry;
        manifest.segments.push_back(std::move(ref));
    }

    manifest.validate();
    for (const auto& ref : manifest.segments) {
        if (!std::filesystem::exists(ref.path)) {
            std::ostringstream msg;
            msg << "missing segment file: " << ref.path.string() << " (center " << ref.center_ghz
                << " GHz, repeat " << ref.repeat << ", " << to_string(ref.scenario) << ")";
            throw Error(msg.str());
        }
    }
    return manifest;
}

void write_manifest(const MeasurementManifest& manifest, const std::filesystem::path& path)
{
    manifest.validate();
    const std::filesystem::path base = std::filesystem::absolute(path).parent_path();

    nlohmann::json j;
    j["material_name"] = manifest.material_name;
    j["category"] = to_string(manifest.category);
    j["thickness_cm"] = manifest.thickness_cm;
    j["width_cm"] = manifest.width_cm;
    j["height_cm"] = manifest.height_cm;
    j["repeats"] = manifest.repeats;
    j["plan"] = {{"centers_ghz", manifest.plan.centers_ghz},
                 {"bandwidth_ghz", manifest.plan.bandwidth_ghz},
                 {"points", manifest.plan.points}};

    nlohmann::json segments = nlohmann::json::array();
    for (const auto& ref : manifest.segments) {
        std::filesystem::path stored = std::filesystem::absolute(ref.path);
        std::error_code ec;
        const auto rel = std::filesystem::relative(stored, base, ec);
        if (!ec && !rel.empty()) stored = rel;
        segments.push_back({{"center_ghz", ref.center_ghz},
                            {"repeat", ref.repeat},
                            {"scenario", to_string(ref.scenario)},
                            {"path", stored.generic_string()}});
    }
    j["segments"] = std::move(segments);
    dump_json(j, path, "manifest");
}

PenetrationLossSeries read_loss_series(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error("cannot open loss series: " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw Error(path.string() + ": empty file");
    strip_cr(line);
    if (line != kSeriesHeader)
        throw Error(path.string() + ": bad header '" + line + "' (expected " + kSeriesHeader +
                    ")");

    PenetrationLossSeries series;
    series.material_name = path.stem().string();
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != 2) {
            std::ostringstream msg;
            msg << path.string() << " row " << line_no << ": expected 2 fields, got "
                << fields.size();
            throw Error(msg.str());
        }
        series.points.push_back({parse_double(fields[0], path, line_no, "center_freq_ghz"),
                                 parse_double(fields[1], path, line_no, "pl_db")});
    }
    series.validate();
    return series;
}

void write_loss_series(const PenetrationLossSeries& series, const std::filesystem::path& path)
{
    series.validate();
    LineWriter out(path);
    out.line(kSeriesHeader);
    for (const auto& p : series.points) out.printf("%.6f,%.6f\n", p.center_ghz, p.loss_db);
    out.close();
}

LinearLossModel read_model(const std::filesystem::path& path)
{
    const std::string ctx = "model";
    const nlohmann::json j = load_json(path, ctx);

    LinearLossModel model;
    model.name = get_field<std::string>(j, "name", ctx);
    model.slope_db_per_ghz = get_field<double>(j, "slope_db_per_ghz", ctx);
    model.intercept_db = get_field<double>(j, "intercept_db", ctx);
    const auto range = get_field<std::vector<double>>(j, "valid_range_ghz", ctx);
    if (range.size() != 2)
        throw Error(ctx + ": field 'valid_range_ghz' must hold exactly [lo, hi]");
    model.range_lo_ghz = range[0];
    model.range_hi_ghz = range[1];
    model.source = model_source_from_string(get_field<std::string>(j, "source", ctx));
    model.validate();
    return model;
}

void write_model(const LinearLossModel& model, const std::filesystem::path& path)
{
    model.validate();
    nlohmann::json j;
    j["name"] = model.name;
    j["slope_db_per_ghz"] = model.slope_db_per_ghz;
    j["intercept_db"] = model.intercept_db;
    j["valid_range_ghz"] = {model.range_lo_ghz, model.range_hi_ghz};
    j["source"] = to_string(model.source);
    dump_json(j, path, "model");
}

void write_comparison_csv(const ModelComparison& comparison, const std::filesystem::path& path)
{
    if (comparison.grid_ghz.size() != comparison.differences_db.size())
        throw Error("comparison: grid and differences disagree in length");
    LineWriter out(path);
    out.line("freq_ghz,diff_db");
    for (std::size_t i = 0; i < comparison.grid_ghz.size(); ++i)
        out.printf("%.6f,%.12g\n", comparison.grid_ghz[i], comparison.differences_db[i]);
    out.close();
}

void write_comparison_summary(const ModelComparison& comparison,
                              const std::filesystem::path& path)
{
    nlohmann::json j;
    j["rmse_db"] = comparison.rmse_db;
    j["min_diff_db"] = comparison.min_difference_db();
    j["max_diff_db"] = comparison.max_difference_db();
    dump_json(j, path, "comparison summary");
}

void write_residuals_csv(const FitResult& result, const std::filesystem::path& path)
{
    if (result.residuals_db.size() != result.series.points.size())
        throw Error("fit result: residual count does not match the series");
    LineWriter out(path);
    out.line("freq_ghz,residual_db");
    for (std::size_t i = 0; i < result.residuals_db.size(); ++i)
        out.printf("%.6f,%.12g\n", result.series.points[i].center_ghz, result.residuals_db[i]);
    out.close();
}

}  // namespace penloss
