#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <string>

#include <sys/wait.h>

#include "penloss/sweep_io.hpp"
#include "test_util.hpp"

using namespace penloss;
using testutil::TempDir;

namespace {

struct CliResult {
    int status = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

CliResult run_cli(const std::string& args, const std::filesystem::path& dir)
{
    const auto out_file = dir / "cli_stdout.txt";
    const auto err_file = dir / "cli_stderr.txt";
    const std::string command = std::string(PENLOSS_CLI_PATH) + " " + args + " >" +
                                out_file.string() + " 2>" + err_file.string();
    const int rc = std::system(command.c_str());
    CliResult result;
    result.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    result.out = slurp(out_file);
    result.err = slurp(err_file);
    return result;
}

void write_concrete_config(const std::filesystem::path& path, int repeats, long seed,
                           const std::string& snr = "null")
{
    std::ofstream(path) << R"({
        "material_name": "Concrete Slab",
        "category": "concrete",
        "thickness_cm": 4.0, "width_cm": 80.0, "height_cm": 80.0,
        "model": "Concrete Slab",
        "snr_db": )" << snr
                        << R"(, "repeats": )" << repeats
                        << R"(, "seed": )" << seed << "}";
}

int count_lines(const std::filesystem::path& path)
{
    std::ifstream in(path);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    return lines;
}

}  // namespace

TEST_CASE("synth writes the full fixture and is reproducible")
{
    TempDir tmp("cli_synth");
    write_concrete_config(tmp.path / "cfg.json", 10, 7, "25.0");

    const auto first = run_cli("synth --config " + (tmp.path / "cfg.json").string() + " --out " +
                                   (tmp.path / "a").string(),
                               tmp.path);
    CHECK(first.status == 0);
    CHECK(first.out.find("240 sweep files") != std::string::npos);

    int csv_files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(tmp.path / "a"))
        if (entry.path().extension() == ".csv") ++csv_files;
    CHECK(csv_files == 240);
    CHECK(std::filesystem::exists(tmp.path / "a" / "manifest.json"));

    const auto second = run_cli("synth --config " + (tmp.path / "cfg.json").string() +
                                    " --out " + (tmp.path / "b").string(),
                                tmp.path);
    REQUIRE(second.status == 0);
    CHECK(slurp(tmp.path / "a" / "manifest.json") == slurp(tmp.path / "b" / "manifest.json"));
    CHECK(slurp(tmp.path / "a" / "los_4.5ghz_r0.csv") ==
          slurp(tmp.path / "b" / "los_4.5ghz_r0.csv"));
    CHECK(slurp(tmp.path / "a" / "nlos_15.5ghz_r9.csv") ==
          slurp(tmp.path / "b" / "nlos_15.5ghz_r9.csv"));

    // a different seed changes the data
    const auto reseeded = run_cli("synth --config " + (tmp.path / "cfg.json").string() +
                                      " --out " + (tmp.path / "c").string() + " --seed 8",
                                  tmp.path);
    REQUIRE(reseeded.status == 0);
    CHECK(slurp(tmp.path / "a" / "los_4.5ghz_r0.csv") !=
          slurp(tmp.path / "c" / "los_4.5ghz_r0.csv"));
}

TEST_CASE("process, fit and compare chain on a concrete fixture")
{
    TempDir tmp("cli_chain");
    write_concrete_config(tmp.path / "cfg.json", 2, 11);
    REQUIRE(run_cli("synth --config " + (tmp.path / "cfg.json").string() + " --out " +
                        (tmp.path / "fix").string(),
                    tmp.path)
                .status == 0);

    const auto process = run_cli("process --manifest " +
                                     (tmp.path / "fix" / "manifest.json").string() + " --out " +
                                     (tmp.path / "loss.csv").string(),
                                 tmp.path);
    CHECK(process.status == 0);
    CHECK(count_lines(tmp.path / "loss.csv") == 13);

    const auto fit = run_cli("fit --series " + (tmp.path / "loss.csv").string() + " --out " +
                                 (tmp.path / "model.json").string() + " --residuals " +
                                 (tmp.path / "residuals.csv").string(),
                             tmp.path);
    CHECK(fit.status == 0);
    CHECK(fit.out == "k=0.95 b=9.83\n");
    CHECK(count_lines(tmp.path / "residuals.csv") == 13);

    const auto compare = run_cli("compare " + (tmp.path / "model.json").string() +
                                     " \"TR 38.901 Concrete Model\" --out " +
                                     (tmp.path / "diff.csv").string(),
                                 tmp.path);
    CHECK(compare.status == 0);
    CHECK(compare.out == "RMSE 27.75 dB\n");
    CHECK(std::filesystem::exists(tmp.path / "summary.json"));

    // explicit grid matches the default grid
    const auto gridded = run_cli("compare " + (tmp.path / "model.json").string() +
                                     " \"TR 38.901 Concrete Model\" --grid 4.5:1:15.5 --out " +
                                     (tmp.path / "diff2.csv").string(),
                                 tmp.path);
    CHECK(gridded.status == 0);
    CHECK(slurp(tmp.path / "diff.csv") == slurp(tmp.path / "diff2.csv"));

    // window and gate flags are wired through; an on-bin fixture is
    // insensitive to them
    const auto flagged = run_cli(
        "process --manifest " + (tmp.path / "fix" / "manifest.json").string() +
            " --window hann --gate-threshold-db 10 --out " + (tmp.path / "loss2.csv").string(),
        tmp.path);
    CHECK(flagged.status == 0);
    CHECK(slurp(tmp.path / "loss.csv") == slurp(tmp.path / "loss2.csv"));
}

TEST_CASE("catalog names work directly in compare")
{
    TempDir tmp("cli_catalog");
    const auto self = run_cli("compare \"Concrete Slab\" \"Concrete Slab\" --out " +
                                  (tmp.path / "self.csv").string(),
                              tmp.path);
    CHECK(self.status == 0);
    CHECK(self.out == "RMSE 0.00 dB\n");

    const auto frost = run_cli("compare \"Frost Glass\" \"TR 38.901 Glass Model\" --out " +
                                   (tmp.path / "frost.csv").string(),
                               tmp.path);
    CHECK(frost.status == 0);
    CHECK(frost.out == "RMSE 1.11 dB\n");

    const auto unknown = run_cli("compare \"Mystery Wall\" \"Concrete Slab\" --out " +
                                     (tmp.path / "x.csv").string(),
                                 tmp.path);
    CHECK(unknown.status != 0);
    CHECK(unknown.err.find("Mystery Wall") != std::string::npos);
}

TEST_CASE("flat series fits to k=0.00 without a negative zero")
{
    TempDir tmp("cli_flat");
    {
        std::ofstream out(tmp.path / "flat.csv");
        out << "center_freq_ghz,pl_db\n";
        for (int i = 0; i < 12; ++i) {
            char line[64];
            std::snprintf(line, sizeof(line), "%.6f,%.6f\n", 4.5 + i, 2.0);
            out << line;
        }
    }
    const auto fit = run_cli("fit --series " + (tmp.path / "flat.csv").string() + " --out " +
                                 (tmp.path / "flat.json").string(),
                             tmp.path);
    CHECK(fit.status == 0);
    CHECK(fit.out == "k=0.00 b=2.00\n");
}

TEST_CASE("a single-point series fails to fit")
{
    TempDir tmp("cli_single");
    std::ofstream(tmp.path / "one.csv") << "center_freq_ghz,pl_db\n4.500000,3.000000\n";
    const auto fit = run_cli("fit --series " + (tmp.path / "one.csv").string() + " --out " +
                                 (tmp.path / "one.json").string(),
                             tmp.path);
    CHECK(fit.status != 0);
    CHECK(fit.err.find("at least 2") != std::string::npos);
}

TEST_CASE("a missing sweep file fails process with the file named")
{
    TempDir tmp("cli_missing");
    write_concrete_config(tmp.path / "cfg.json", 1, 3);
    REQUIRE(run_cli("synth --config " + (tmp.path / "cfg.json").string() + " --out " +
                        (tmp.path / "fix").string(),
                    tmp.path)
                .status == 0);
    std::filesystem::remove(tmp.path / "fix" / "nlos_8.5ghz_r0.csv");

    const auto process = run_cli("process --manifest " +
                                     (tmp.path / "fix" / "manifest.json").string() + " --out " +
                                     (tmp.path / "loss.csv").string(),
                                 tmp.path);
    CHECK(process.status != 0);
    CHECK(process.err.find("nlos_8.5ghz_r0.csv") != std::string::npos);
}

TEST_CASE("report composes process, fit and compare byte for byte")
{
    TempDir tmp("cli_report");
    write_concrete_config(tmp.path / "cfg.json", 2, 19);
    REQUIRE(run_cli("synth --config " + (tmp.path / "cfg.json").string() + " --out " +
                        (tmp.path / "fix").string(),
                    tmp.path)
                .status == 0);

    const auto report = run_cli("report --manifest " +
                                    (tmp.path / "fix" / "manifest.json").string() +
                                    " --reference \"TR 38.901 Concrete Model\" --out " +
                                    (tmp.path / "rep").string(),
                                tmp.path);
    CHECK(report.status == 0);
    CHECK(report.out.find("k=0.95 b=9.83") != std::string::npos);
    CHECK(report.out.find("RMSE 27.75 dB") != std::string::npos);

    for (const char* name : {"summary.md", "loss.csv", "diff.csv", "model.json", "summary.json"})
        CHECK(std::filesystem::exists(tmp.path / "rep" / name));

    const std::string markdown = slurp(tmp.path / "rep" / "summary.md");
    CHECK(markdown.find("| Concrete Slab (fitted) | 0.95 | 9.83 | 27.75 |") !=
          std::string::npos);
    CHECK(markdown.find("| TR 38.901 Concrete Model | 4.00 | 5.00 |") != std::string::npos);

    // the individual commands produce identical bytes on the shared outputs
    REQUIRE(run_cli("process --manifest " + (tmp.path / "fix" / "manifest.json").string() +
                        " --out " + (tmp.path / "loss.csv").string(),
                    tmp.path)
                .status == 0);
    REQUIRE(run_cli("fit --series " + (tmp.path / "loss.csv").string() + " --out " +
                        (tmp.path / "model.json").string(),
                    tmp.path)
                .status == 0);
    REQUIRE(run_cli("compare " + (tmp.path / "model.json").string() +
                        " \"TR 38.901 Concrete Model\" --out " + (tmp.path / "diff.csv").string() +
                        " --summary " + (tmp.path / "summary.json").string(),
                    tmp.path)
                .status == 0);
    CHECK(slurp(tmp.path / "rep" / "loss.csv") == slurp(tmp.path / "loss.csv"));
    CHECK(slurp(tmp.path / "rep" / "model.json") == slurp(tmp.path / "model.json"));
    CHECK(slurp(tmp.path / "rep" / "diff.csv") == slurp(tmp.path / "diff.csv"));
    CHECK(slurp(tmp.path / "rep" / "summary.json") == slurp(tmp.path / "summary.json"));
}

TEST_CASE("an air-slab report fits a flat zero line")
{
    TempDir tmp("cli_air");
    std::ofstream(tmp.path / "air.json") << R"({
        "material_name": "Air Gap",
        "category": "other",
        "thickness_cm": 13.0, "width_cm": 100, "height_cm": 100,
        "stack": [{"rel_permittivity": 1.0, "loss_tangent": 0.0, "thickness_m": 0.13}],
        "repeats": 1, "seed": 1
    })";
    REQUIRE(run_cli("synth --config " + (tmp.path / "air.json").string() + " --out " +
                        (tmp.path / "fix").string(),
                    tmp.path)
                .status == 0);
    const auto report = run_cli("report --manifest " +
                                    (tmp.path / "fix" / "manifest.json").string() +
                                    " --reference \"TR 38.901 Wood Model\" --out " +
                                    (tmp.path / "rep").string(),
                                tmp.path);
    CHECK(report.status == 0);
    CHECK(report.out.find("k=0.00 b=0.00") != std::string::npos);
}

TEST_CASE("an unwritable output directory fails synth")
{
    TempDir tmp("cli_unwritable");
    write_concrete_config(tmp.path / "cfg.json", 1, 2);
    std::ofstream(tmp.path / "blocker") << "";  // a file where a directory is needed

    const auto result = run_cli("synth --config " + (tmp.path / "cfg.json").string() +
                                    " --out " + (tmp.path / "blocker" / "fix").string(),
                                tmp.path);
    CHECK(result.status != 0);
    CHECK(result.err.find("error:") != std::string::npos);
}

TEST_CASE("unknown flags are rejected")
{
    TempDir tmp("cli_badflag");
    const auto result = run_cli("process --manifest x.json --out y.csv --frobnicate", tmp.path);
    CHECK(result.status != 0);
}

TEST_CASE("a malformed grid argument is rejected")
{
    TempDir tmp("cli_badgrid");
    const auto result = run_cli(
        "compare \"Concrete Slab\" \"Concrete Slab\" --grid nonsense --out " +
            (tmp.path / "d.csv").string(),
        tmp.path);
    CHECK(result.status != 0);
    CHECK(result.err.find("lo:step:hi") != std::string::npos);
}
