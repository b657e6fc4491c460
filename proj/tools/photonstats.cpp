// photonstats: photon statistics of driven cavity QED from the command line
//
//   photonstats <command> [--config FILE] [--param value ...] [--out FILE] [--format csv|json]
//
// Exit status: 0 success, 1 I/O failure, 2 invalid configuration, 3 numerical
// failure at one or more points (the failed rows still carry an error field).

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "photonstats/cli.hpp"

namespace ps = photonstats;

namespace {

const std::map<std::string, std::string> kHelp{
    {"model", "jc | com-effective | com-full"},
    {"delta_c", "cavity detuning Delta (kappa)"},
    {"delta_a", "atomic detuning delta (kappa)"},
    {"delta_tilde", "delta - Delta, jc only (kappa)"},
    {"nu", "trap frequency (kappa)"},
    {"g", "coupling (kappa)"},
    {"omega", "drive amplitude Omega (kappa)"},
    {"kappa", "cavity decay; the unit, must be 1"},
    {"gamma", "atomic decay (kappa)"},
    {"Gamma", "phonon decay (kappa)"},
    {"photon_cutoff", "max photon number (>= 2)"},
    {"phonon_cutoff", "max phonon number (0 = none)"},
    {"var", "swept variable: delta_c | delta_a | nu | gamma"},
    {"min", "first axis start"},
    {"max", "first axis end"},
    {"points", "first axis points"},
    {"var2", "second heatmap variable"},
    {"min2", "second axis start"},
    {"max2", "second axis end"},
    {"points2", "second axis points"},
    {"link", "none | hold_delta_tilde | com_resonance | com_hold_nu"},
    {"numeric", "run the master equation (true/false)"},
    {"analytic", "evaluate weak-drive closed forms (true/false)"},
    {"convergence", "rerun with cutoffs + 1 (true/false)"},
    {"tau_max", "largest delay (1/kappa)"},
    {"tau_points", "number of delays"},
    {"out", "output file (default: stdout)"},
    {"format", "csv | json"},
    {"kappa_hz", "kappa in Hz, recorded in the manifest only"},
    {"artifact_version", "accepted for manifest round trips"},
};

const char* kDescriptions[][2] = {
    {"jc-sweep", "Jaynes-Cummings sweep (default: delta_c over [-100,100], g=50, gamma=1, Omega=0.1, delta_tilde=50)"},
    {"com-sweep", "centre-of-mass sweep (default: nu over [0,200], delta=-100, Delta=delta+nu, Gamma=0.1)"},
    {"heatmap", "two-axis grid with log10 g2(0) (default: nu x gamma, delta=-50, Gamma=0.1)"},
    {"g2tau", "delayed correlation by regression and amplitude routes (default: g=20, delta=-70, Omega=4)"},
    {"eigen", "closed-form dressed energies against dense diagonalisation"},
    {"preset", "run a named figure preset: fig1c fig1d fig1d-com fig2c fig2d fig3a fig3b fig3c fig4"},
};

struct Sub {
    CLI::App* app{nullptr};
    ps::Command command{};
    std::map<std::string, std::string> values;
    std::optional<std::string> config;
    std::string preset;
    bool hint{false};
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Photon statistics of driven cavity QED: master equation and weak-drive closed forms.\n"
                 "Rates and detunings are in units of kappa. PHOTONSTATS_THREADS sets the worker count."};
    app.require_subcommand(1);
    app.set_version_flag("--version", ps::kArtifactVersion);

    std::vector<Sub> subs(std::size(kDescriptions));
    for (std::size_t i = 0; i < subs.size(); ++i) {
        Sub& s = subs[i];
        s.command = ps::parse_command(kDescriptions[i][0]);
        s.app = app.add_subcommand(kDescriptions[i][0], kDescriptions[i][1]);
        s.app->add_option("--config", s.config, "flat JSON config or a previous JSON result");
        s.app->add_flag("--gnuplot-hint", s.hint, "print a gnuplot command for the CSV output on stderr");
        if (s.command == ps::Command::preset) s.app->add_option("name", s.preset, "preset name")->required();
        for (const auto& [key, help] : kHelp) s.app->add_option("--" + key, s.values[key], help);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ps::ExitCode::validation);
    }

    Sub* chosen = nullptr;
    for (auto& s : subs)
        if (s.app->parsed()) chosen = &s;

    ps::RunConfig cfg;
    try {
        std::vector<std::pair<std::string, std::string>> flags;
        if (chosen->command == ps::Command::preset) flags.emplace_back("preset", chosen->preset);
        for (const auto& [key, value] : chosen->values)
            if (chosen->app->count("--" + key) > 0) flags.emplace_back(key, value);
        cfg = ps::parse_config(chosen->command, chosen->config, flags);
    } catch (const ps::IoError& e) {
        std::cerr << "photonstats: " << e.what() << '\n';
        return static_cast<int>(ps::ExitCode::io);
    } catch (const ps::Error& e) {
        std::cerr << "photonstats: invalid configuration: " << e.what() << '\n';
        return static_cast<int>(ps::ExitCode::validation);
    }

    ps::RunOutput out;
    try {
        out = ps::execute(cfg);
    } catch (const ps::ValidationError& e) {
        std::cerr << "photonstats: invalid configuration: " << e.what() << '\n';
        return static_cast<int>(ps::ExitCode::validation);
    } catch (const ps::Error& e) {
        std::cerr << "photonstats: numerical failure: " << e.what() << '\n';
        return static_cast<int>(ps::ExitCode::numerical);
    }

    const std::string text = ps::render(cfg, out);
    if (cfg.out) {
        std::ofstream f(*cfg.out, std::ios::binary);
        f << text;
        f.close();
        if (!f) {
            std::cerr << "photonstats: cannot write '" << *cfg.out << "'\n";
            return static_cast<int>(ps::ExitCode::io);
        }
    } else {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) return static_cast<int>(ps::ExitCode::io);
    }

    if (chosen->hint) std::cerr << ps::gnuplot_hint(cfg, out.table, cfg.out.value_or("data.csv")) << '\n';
    if (!out.ok) {
        std::cerr << "photonstats: some points failed; see the error column\n";
        return static_cast<int>(ps::ExitCode::numerical);
    }
    return 0;
}
