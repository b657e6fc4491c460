#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "photonstats/cli.hpp"

using namespace photonstats;
namespace fs = std::filesystem;

namespace {

using Flags = std::vector<std::pair<std::string, std::string>>;

fs::path scratch_dir() {
    const fs::path d = fs::temp_directory_path() / ("photonstats_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
}

fs::path write_file(const std::string& name, const std::string& text) {
    const fs::path p = scratch_dir() / name;
    std::ofstream(p) << text;
    return p;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + PHOTONSTATS_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

// Two-point linear cavity: cheap and exactly solvable.
Flags tiny_jc() {
    return {{"g", "0"}, {"photon_cutoff", "4"}, {"points", "2"}, {"min", "-1"}, {"max", "1"}};
}

} // namespace

TEST(Config, PresetDefaults) {
    const auto cfg = parse_config(Command::preset, std::nullopt, {{"preset", "fig1d"}});
    EXPECT_EQ(cfg.spec.model, Model::jc);
    EXPECT_EQ(cfg.spec.base.g, 50);
    EXPECT_EQ(cfg.spec.base.omega, 0.1);
    EXPECT_EQ(cfg.spec.base.delta_tilde(), 50);
    EXPECT_EQ(cfg.spec.axes[0].points, 801);
    EXPECT_EQ(cfg.format, Format::csv);
}

TEST(Config, FlagOverridesFile) {
    const auto path = write_file("omega.json", R"({"omega": 0.2, "gamma": 2})");
    const auto cfg = parse_config(Command::jc_sweep, path.string(), {{"omega", "0.05"}});
    EXPECT_EQ(cfg.spec.base.omega, 0.05);
    EXPECT_EQ(cfg.spec.base.gamma, 2);
}

TEST(Config, NegativeRateRejected) {
    EXPECT_THROW(parse_config(Command::jc_sweep, std::nullopt, {{"gamma", "-1"}}), ValidationError);
    EXPECT_THROW(parse_config(Command::com_sweep, std::nullopt, {{"Gamma", "-0.1"}}), ValidationError);
}

TEST(Config, UnknownKeyAndBadValues) {
    EXPECT_THROW(parse_config(Command::jc_sweep, std::nullopt, {{"omgea", "1"}}), ValidationError);
    EXPECT_THROW(parse_config(Command::jc_sweep, std::nullopt, {{"omega", "strong"}}), ValidationError);
    EXPECT_THROW(parse_config(Command::jc_sweep, std::nullopt, {{"points", "2.5"}}), ValidationError);
    EXPECT_THROW(parse_config(Command::jc_sweep, std::nullopt, {{"format", "xml"}}), ValidationError);
    EXPECT_THROW(parse_config(Command::jc_sweep, std::nullopt, {{"photon_cutoff", "1"}}), ValidationError);
    const auto bad = write_file("bad.json", "{\"omega\": ");
    EXPECT_THROW(parse_config(Command::jc_sweep, bad.string(), {}), ValidationError);
    EXPECT_THROW(parse_config(Command::jc_sweep, (scratch_dir() / "missing.json").string(), {}), IoError);
}

TEST(Config, ConflictsAreErrors) {
    EXPECT_THROW(parse_config(Command::jc_sweep, std::nullopt, {{"nu", "10"}}), ValidationError);
    EXPECT_THROW(parse_config(Command::jc_sweep, std::nullopt, {{"phonon_cutoff", "2"}}), ValidationError);
    EXPECT_THROW(parse_config(Command::jc_sweep, std::nullopt, {{"model", "com-effective"}}), ValidationError);
    EXPECT_THROW(parse_config(Command::jc_sweep, std::nullopt, {{"kappa", "2"}}), ValidationError);
    EXPECT_THROW(parse_config(Command::jc_sweep, std::nullopt, {{"delta_a", "1"}, {"delta_tilde", "2"}}),
                 ValidationError);
    EXPECT_THROW(parse_config(Command::com_sweep, std::nullopt, {{"phonon_cutoff", "0"}}), ValidationError);
    EXPECT_THROW(parse_config(Command::com_sweep, std::nullopt, {{"nu", "10"}, {"delta_c", "0"}}), ValidationError);
    EXPECT_THROW(parse_config(Command::g2tau, std::nullopt, {{"points", "10"}}), ValidationError);
    EXPECT_THROW(parse_config(Command::jc_sweep, std::nullopt, {{"tau_max", "3"}}), ValidationError);
    EXPECT_THROW(parse_config(Command::jc_sweep, std::nullopt, {{"var2", "gamma"}}), ValidationError);
    EXPECT_THROW(parse_config(Command::jc_sweep, std::nullopt, {{"preset", "fig1d"}}), ValidationError);
    EXPECT_THROW(parse_config(Command::preset, std::nullopt, {{"preset", "fig1d"}, {"model", "com-full"}}),
                 ValidationError);
    EXPECT_THROW(parse_config(Command::preset, std::nullopt, {{"preset", "nope"}}), ValidationError);
    const auto other = write_file("other.json", R"({"command": "heatmap"})");
    EXPECT_THROW(parse_config(Command::jc_sweep, other.string(), {}), ValidationError);
}

TEST(Config, JcDeltaCKeepsDeltaTilde) {
    const auto cfg = parse_config(Command::jc_sweep, std::nullopt, {{"delta_c", "10"}});
    EXPECT_EQ(cfg.spec.base.delta_tilde(), 50);
    EXPECT_EQ(cfg.spec.base.delta_a, 60);
}

TEST(Output, CsvHasHeaderAndOneLinePerPoint) {
    const auto cfg = parse_config(Command::jc_sweep, std::nullopt, tiny_jc());
    const auto out = execute(cfg);
    ASSERT_TRUE(out.ok);
    const auto ls = lines(render(cfg, out));
    ASSERT_EQ(ls.size(), 3u);
    EXPECT_EQ(ls[0], "delta_c,delta_a,nbar_num,g2_num,nbar_ana,g2_ana,residual,truncation_delta,error");
    // Full double precision in scientific notation.
    EXPECT_NE(ls[1].find("-1.00000000000000000e+00,"), std::string::npos);
    const int g2 = out.table.column("g2_num");
    EXPECT_NEAR(std::get<double>(out.table.rows[0][static_cast<std::size_t>(g2)]), 1.0, 1e-6);
}

TEST(Output, HeatmapCarriesLogColumns) {
    const auto cfg = parse_config(Command::heatmap, std::nullopt, {{"model", "jc"}, {"g", "0"}, {"photon_cutoff", "4"},
                                                                     {"points", "2"}, {"points2", "2"}});
    const auto out = execute(cfg);
    EXPECT_EQ(out.table.rows.size(), 4u);
    EXPECT_GE(out.table.column("log10_g2_num"), 0);
    EXPECT_GE(out.table.column("log10_g2_ana"), 0);
    EXPECT_LT(out.table.column("gamma"), out.table.column("nbar_num"));
}

TEST(Output, CsvQuoting) {
    EXPECT_EQ(csv_field("plain"), "plain");
    EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
    EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    EXPECT_EQ(csv_field("two\nlines"), "\"two\nlines\"");
    Table t;
    t.columns = {"x", "error"};
    t.rows = {{1.5, std::string("numeric: bad, worse")}, {Cell{}, std::string()}};
    const auto ls = lines(to_csv(t));
    EXPECT_EQ(ls[1], "1.50000000000000000e+00,\"numeric: bad, worse\"");
    EXPECT_EQ(ls[2], ",");
}

TEST(Output, JsonErrorRowsHaveNullsAndMessage) {
    const auto cfg = parse_config(Command::jc_sweep, std::nullopt,
                                  {{"g", "0"}, {"omega", "0"}, {"points", "2"}, {"format", "json"}});
    const auto out = execute(cfg);
    EXPECT_FALSE(out.ok);
    const json doc = json::parse(render(cfg, out));
    ASSERT_EQ(doc["rows"].size(), 2u);
    for (const auto& row : doc["rows"]) {
        EXPECT_TRUE(row["g2_num"].is_null());
        EXPECT_TRUE(row["g2_ana"].is_null());
        EXPECT_FALSE(row["error"].get<std::string>().empty());
    }
    EXPECT_EQ(doc["summary"]["failed"], 2);
}

TEST(Output, ManifestIsComplete) {
    const auto cfg = parse_config(Command::com_sweep, std::nullopt, {{"kappa_hz", "2.1e6"}});
    const json m = manifest(cfg);
    for (const char* k : {"artifact_version", "command", "model", "delta_c", "delta_a", "nu", "g", "omega", "kappa",
                          "gamma", "Gamma", "photon_cutoff", "phonon_cutoff", "link", "var", "min", "max", "points",
                          "numeric", "analytic", "convergence", "format", "kappa_hz"})
        EXPECT_TRUE(m.contains(k)) << k;
    EXPECT_EQ(m["artifact_version"], kArtifactVersion);
    EXPECT_EQ(m["kappa_hz"], 2.1e6);
    const json jc = manifest(parse_config(Command::jc_sweep, std::nullopt, {}));
    EXPECT_FALSE(jc.contains("nu"));
    EXPECT_FALSE(jc.contains("Gamma"));
}

TEST(Output, JsonRoundTripReproducesOutput) {
    auto f = tiny_jc();
    f.emplace_back("format", "json");
    f.emplace_back("omega", "0.07");
    const auto cfg = parse_config(Command::jc_sweep, std::nullopt, f);
    const std::string first = render(cfg, execute(cfg));
    const auto saved = write_file("first.json", first);
    const auto again = parse_config(Command::jc_sweep, saved.string(), {});
    EXPECT_EQ(render(again, execute(again)), first);
}

TEST(Output, RoundTripEveryCommandManifest) {
    const std::vector<std::pair<Command, Flags>> cases{
        {Command::com_sweep, {{"points", "3"}, {"photon_cutoff", "2"}, {"phonon_cutoff", "1"}}},
        {Command::heatmap, {{"points", "2"}, {"points2", "2"}, {"photon_cutoff", "2"}, {"phonon_cutoff", "1"}}},
        {Command::g2tau, {{"tau_points", "5"}, {"omega", "0.1"}, {"photon_cutoff", "2"}, {"phonon_cutoff", "2"}}},
        {Command::eigen, {{"model", "com-effective"}, {"phonon_cutoff", "3"}}},
        {Command::preset, {{"preset", "fig2c"}, {"points", "3"}}},
    };
    for (const auto& [cmd, flags] : cases) {
        const auto cfg = parse_config(cmd, std::nullopt, flags);
        const auto path = write_file(std::string(to_string(cmd)) + ".json", manifest(cfg).dump());
        const auto again = parse_config(cmd, path.string(), {});
        EXPECT_EQ(manifest(again), manifest(cfg)) << to_string(cmd);
    }
}

TEST(Output, G2TauSummaryAndColumns) {
    const auto cfg = parse_config(Command::g2tau, std::nullopt,
                                  {{"tau_points", "11"}, {"omega", "0.1"}, {"photon_cutoff", "3"},
                                   {"phonon_cutoff", "3"}, {"format", "json"}});
    const auto out = execute(cfg);
    ASSERT_TRUE(out.ok);
    EXPECT_EQ(out.table.columns, (std::vector<std::string>{"tau", "g2_regression", "g2_amplitude"}));
    EXPECT_EQ(out.table.rows.size(), 11u);
    for (const char* k : {"g2_zero_regression", "g2_zero_amplitude", "schwarz_regression", "schwarz_amplitude"})
        EXPECT_TRUE(out.summary.contains(k)) << k;
}

TEST(Output, EigenTableMatchesSpectrum) {
    for (const char* model : {"jc", "com-effective"}) {
        const auto cfg = parse_config(Command::eigen, std::nullopt,
                                      {{"model", model}, {"phonon_cutoff", model == std::string("jc") ? "0" : "3"}});
        const auto out = execute(cfg);
        ASSERT_FALSE(out.table.rows.empty());
        const auto c = static_cast<std::size_t>(out.table.column("energy_closed"));
        for (const auto& row : out.table.rows)
            EXPECT_NEAR(std::get<double>(row[c]), std::get<double>(row[c + 1]), 1e-10) << model;
    }
    EXPECT_THROW(parse_config(Command::eigen, std::nullopt, {{"model", "com-full"}}), ValidationError);
}

TEST(Binary, ExitCodes) {
    const auto dir = scratch_dir();
    const std::string ok = "jc-sweep --g 0 --photon_cutoff 4 --points 2";
    EXPECT_EQ(run_cli(ok), 0);
    EXPECT_EQ(run_cli(ok + " --out \"" + (dir / "ok.csv").string() + "\""), 0);
    EXPECT_EQ(lines(read_file(dir / "ok.csv")).size(), 3u);
    EXPECT_EQ(run_cli("--help"), 0);
    EXPECT_EQ(run_cli("jc-sweep --gamma -1"), 2);
    EXPECT_EQ(run_cli("jc-sweep --no-such-flag 1"), 2);
    EXPECT_EQ(run_cli("jc-sweep --nu 5"), 2);
    EXPECT_EQ(run_cli("frobnicate"), 2);
    EXPECT_EQ(run_cli("preset fig9"), 2);
    EXPECT_EQ(run_cli("jc-sweep --config \"" + (dir / "absent.json").string() + "\""), 1);
    EXPECT_EQ(run_cli(ok + " --out \"" + (dir / "no_dir" / "x.csv").string() + "\""), 1);
    EXPECT_EQ(run_cli("jc-sweep --g 0 --omega 0 --points 2"), 3);
}

TEST(Binary, JsonRoundTripThroughFiles) {
    const auto dir = scratch_dir();
    const std::string a = (dir / "a.json").string(), b = (dir / "b.json").string();
    ASSERT_EQ(run_cli("com-sweep --points 3 --photon_cutoff 2 --phonon_cutoff 1 --omega 0.05 --format json --out \"" +
                      a + "\""),
              0);
    ASSERT_EQ(run_cli("com-sweep --config \"" + a + "\" --out \"" + b + "\""), 0);
    EXPECT_EQ(read_file(a), read_file(b));
}
