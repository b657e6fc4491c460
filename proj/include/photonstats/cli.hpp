// cli.hpp: Run configuration, result tables and CSV/JSON serialisation
//
// A run is configured from three layers, later ones winning: per-command defaults,
// a flat JSON config file, and command-line flags.  Every key is typed and unknown
// keys are rejected.  A JSON result carries a "manifest" object that can be fed
// back as a config file to repeat the run.

#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "photonstats/sweep.hpp"
#include "photonstats/version.hpp"

namespace photonstats {

using json = nlohmann::ordered_json;

enum class Command { jc_sweep, com_sweep, heatmap, g2tau, eigen, preset };

inline const char* to_string(Command c) {
    switch (c) {
    case Command::jc_sweep: return "jc-sweep";
    case Command::com_sweep: return "com-sweep";
    case Command::heatmap: return "heatmap";
    case Command::g2tau: return "g2tau";
    case Command::eigen: return "eigen";
    case Command::preset: return "preset";
    }
    return "?";
}

inline Command parse_command(std::string_view s) {
    for (Command c : {Command::jc_sweep, Command::com_sweep, Command::heatmap, Command::g2tau, Command::eigen,
                      Command::preset})
        if (s == to_string(c)) return c;
    throw ValidationError("unknown command '" + std::string(s) + "'");
}

inline Model parse_model(std::string_view s) {
    for (Model m : {Model::jc, Model::com_effective, Model::com_full})
        if (s == to_string(m)) return m;
    throw ValidationError("unknown model '" + std::string(s) + "' (jc, com-effective, com-full)");
}

enum class Format { csv, json };

inline const char* to_string(Format f) { return f == Format::csv ? "csv" : "json"; }

inline Format parse_format(std::string_view s) {
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    throw ValidationError("unknown format '" + std::string(s) + "' (csv, json)");
}

enum class ExitCode : int { ok = 0, io = 1, validation = 2, numerical = 3 };

enum class KeyType { number, integer, boolean, string };

inline const std::map<std::string, KeyType, std::less<>>& config_keys() {
    static const std::map<std::string, KeyType, std::less<>> keys{
        {"command", KeyType::string},     {"preset", KeyType::string},        {"model", KeyType::string},
        {"delta_c", KeyType::number},     {"delta_a", KeyType::number},       {"delta_tilde", KeyType::number},
        {"nu", KeyType::number},          {"g", KeyType::number},             {"omega", KeyType::number},
        {"kappa", KeyType::number},       {"gamma", KeyType::number},         {"Gamma", KeyType::number},
        {"photon_cutoff", KeyType::integer}, {"phonon_cutoff", KeyType::integer},
        {"var", KeyType::string},         {"min", KeyType::number},           {"max", KeyType::number},
        {"points", KeyType::integer},     {"var2", KeyType::string},          {"min2", KeyType::number},
        {"max2", KeyType::number},        {"points2", KeyType::integer},      {"link", KeyType::string},
        {"numeric", KeyType::boolean},    {"analytic", KeyType::boolean},     {"convergence", KeyType::boolean},
        {"tau_max", KeyType::number},     {"tau_points", KeyType::integer},   {"out", KeyType::string},
        {"format", KeyType::string},      {"kappa_hz", KeyType::number},      {"artifact_version", KeyType::string},
    };
    return keys;
}

inline KeyType key_type(std::string_view key) {
    const auto& keys = config_keys();
    const auto it = keys.find(key);
    if (it == keys.end()) throw ValidationError("unknown key '" + std::string(key) + "'");
    return it->second;
}

// Converts a command-line string to the JSON value the key expects.
inline json coerce_flag(std::string_view key, const std::string& value) {
    const KeyType t = key_type(key);
    const std::string where = "--" + std::string(key) + " " + value;
    try {
        std::size_t used = 0;
        switch (t) {
        case KeyType::number: {
            const double v = std::stod(value, &used);
            if (used != value.size()) break;
            return v;
        }
        case KeyType::integer: {
            const long long v = std::stoll(value, &used);
            if (used != value.size()) break;
            return v;
        }
        case KeyType::boolean:
            if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
            if (value == "false" || value == "0" || value == "no" || value == "off") return false;
            break;
        case KeyType::string: return value;
        }
    } catch (const std::logic_error&) {
    }
    throw ValidationError("cannot parse " + where);
}

inline void check_value(std::string_view key, const json& v) {
    const std::string k(key);
    switch (key_type(key)) {
    case KeyType::number:
        if (!v.is_number()) throw ValidationError("key '" + k + "' expects a number");
        if (!std::isfinite(v.get<double>())) throw ValidationError("key '" + k + "' must be finite");
        return;
    case KeyType::integer:
        if (v.is_number_integer()) return;
        if (v.is_number_float()) {
            const double d = v.get<double>();
            if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 1e15) return;
        }
        throw ValidationError("key '" + k + "' expects an integer");
    case KeyType::boolean:
        if (!v.is_boolean()) throw ValidationError("key '" + k + "' expects true or false");
        return;
    case KeyType::string:
        if (!v.is_string()) throw ValidationError("key '" + k + "' expects a string");
        return;
    }
}

// Flat key/value object from a config file; a JSON result file contributes its manifest.
inline json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path + "'");
    json doc;
    try {
        doc = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ValidationError("config '" + path + "' is not valid JSON: " + e.what());
    }
    if (!doc.is_object()) throw ValidationError("config '" + path + "' must hold a JSON object");
    if (doc.contains("manifest")) {
        if (!doc["manifest"].is_object()) throw ValidationError("'manifest' must be an object");
        return doc["manifest"];
    }
    return doc;
}

struct RunConfig {
    Command command{Command::preset};
    std::string preset; // preset command only
    SweepSpec spec;
    Format format{Format::csv};
    std::optional<std::string> out;
    std::optional<double> kappa_hz; // recorded, never used in computation
};

namespace detail {

inline SweepKind command_kind(Command c) {
    if (c == Command::heatmap) return SweepKind::heatmap;
    if (c == Command::g2tau) return SweepKind::g2tau;
    return SweepKind::sweep;
}

inline SweepSpec command_defaults(Command c, Model m) {
    const SweepKind kind = command_kind(c);
    SweepSpec s;
    if (m == Model::jc) {
        s = figure_preset("fig1d");
        if (kind == SweepKind::heatmap)
            s.axes = {Axis{SweepVariable::delta_c, -100.0, 100.0, 101}, Axis{SweepVariable::gamma, 0.0, 15.0, 101}};
        if (kind == SweepKind::g2tau) s.axes.clear();
    } else {
        s = figure_preset(kind == SweepKind::sweep ? "fig2d" : kind == SweepKind::heatmap ? "fig3a" : "fig4");
        s.model = m;
        if (m == Model::com_full) s.analytic = false;
    }
    s.kind = kind;
    if (c == Command::eigen) {
        s.axes.clear();
        s.convergence = false;
        if (m != Model::jc) s.base.nu = 100.0;
    }
    s.name = to_string(c);
    return s;
}

inline bool allowed_model(Command c, Model m) {
    switch (c) {
    case Command::jc_sweep: return m == Model::jc;
    case Command::com_sweep: return m != Model::jc;
    case Command::eigen: return m != Model::com_full;
    default: return true;
    }
}

inline bool close_enough(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }

} // namespace detail

// Layers `flags` over `file` over the command defaults and validates the result.
inline RunConfig resolve_config(Command cmd, const json& file, const json& flags) {
    if (!file.is_object() || !flags.is_object()) throw ValidationError("config layers must be objects");
    json kv = file;
    for (const auto& [k, v] : flags.items()) kv[k] = v;
    for (const auto& [k, v] : kv.items()) check_value(k, v);

    auto has = [&](const char* k) { return kv.contains(k); };
    auto num = [&](const char* k) { return kv.at(k).get<double>(); };
    auto integer = [&](const char* k) { return static_cast<int>(std::llround(kv.at(k).get<double>())); };
    auto str = [&](const char* k) { return kv.at(k).get<std::string>(); };

    if (has("command") && str("command") != to_string(cmd))
        throw ValidationError("config is for command '" + str("command") + "', not '" + to_string(cmd) + "'");

    RunConfig cfg;
    cfg.command = cmd;

    Model model = Model::jc;
    if (cmd == Command::preset) {
        if (!has("preset")) throw ValidationError("preset command needs a preset name");
        cfg.preset = str("preset");
        cfg.spec = figure_preset(cfg.preset);
        model = cfg.spec.model;
        if (has("model") && parse_model(str("model")) != model)
            throw ValidationError("preset '" + cfg.preset + "' fixes model " + to_string(model));
    } else {
        if (has("preset")) throw ValidationError("key 'preset' is only valid with the preset command");
        if (cmd != Command::jc_sweep && cmd != Command::eigen) model = Model::com_effective;
        if (has("model")) model = parse_model(str("model"));
        if (!detail::allowed_model(cmd, model))
            throw ValidationError(std::string("model ") + to_string(model) + " is not valid for " + to_string(cmd));
        cfg.spec = detail::command_defaults(cmd, model);
    }
    SweepSpec& s = cfg.spec;
    ModelParams& p = s.base;
    const bool jc = model == Model::jc;

    if (jc) {
        for (const char* k : {"nu", "Gamma"})
            if (has(k) && num(k) != 0.0)
                throw ValidationError(std::string("'") + k + "' is a phonon setting; the jc model has no phonon mode");
        if (has("phonon_cutoff") && integer("phonon_cutoff") != 0)
            throw ValidationError("'phonon_cutoff' is a phonon setting; the jc model has no phonon mode");
    }
    if (has("kappa") && num("kappa") != 1.0) throw ValidationError("rates are in units of kappa; kappa must be 1");
    if (has("delta_a") && has("delta_tilde")) throw ValidationError("give either delta_a or delta_tilde, not both");
    if (!jc && has("delta_tilde")) throw ValidationError("delta_tilde applies to the jc model; set delta_a instead");

    if (has("link")) s.link = parse_link(str("link"));

    for (const auto& [k, ref] : std::initializer_list<std::pair<const char*, double*>>{
             {"g", &p.g}, {"omega", &p.omega}, {"gamma", &p.gamma}, {"nu", &p.nu}, {"Gamma", &p.Gamma}})
        if (has(k)) *ref = num(k);

    const double old_dt = p.delta_tilde();
    if (has("delta_c") && s.link != Link::com_resonance) p.delta_c = num("delta_c");
    if (has("delta_a")) p.delta_a = num("delta_a");
    if (has("delta_tilde")) p.set_delta_tilde(num("delta_tilde"));
    else if (jc && has("delta_c") && !has("delta_a")) p.set_delta_tilde(old_dt);

    if (s.link == Link::com_resonance) {
        const double want = p.delta_a + p.nu;
        if (has("delta_c") && !detail::close_enough(num("delta_c"), want))
            throw ValidationError("delta_c is fixed to delta_a + nu by the com_resonance link");
        p.delta_c = want;
    }
    if (s.link == Link::com_hold_nu) {
        const double want = p.delta_c - p.nu;
        if (has("delta_a") && !detail::close_enough(num("delta_a"), want))
            throw ValidationError("delta_a is fixed to delta_c - nu by the com_hold_nu link");
        p.delta_a = want;
    }

    if (has("photon_cutoff") || has("phonon_cutoff")) {
        try {
            s.space = SpaceSpec(has("photon_cutoff") ? integer("photon_cutoff") : s.space.photon_cutoff(),
                                has("phonon_cutoff") ? integer("phonon_cutoff") : s.space.phonon_cutoff());
        } catch (const DimensionError& e) {
            throw ValidationError(e.what());
        }
    }

    const bool grid_cmd = s.kind != SweepKind::g2tau && cmd != Command::eigen;
    for (const char* k : {"var", "min", "max", "points"})
        if (has(k) && !grid_cmd) throw ValidationError(std::string("key '") + k + "' is not valid for " + to_string(cmd));
    for (const char* k : {"var2", "min2", "max2", "points2"})
        if (has(k) && (s.kind != SweepKind::heatmap || cmd == Command::eigen))
            throw ValidationError(std::string("key '") + k + "' needs a two-axis heatmap");
    for (const char* k : {"tau_max", "tau_points"})
        if (has(k) && s.kind != SweepKind::g2tau)
            throw ValidationError(std::string("key '") + k + "' is only valid for g2tau runs");

    auto apply_axis = [&](Axis& a, const std::string& suffix) {
        const std::string var = "var" + suffix, lo = "min" + suffix, hi = "max" + suffix, n = "points" + suffix;
        if (has(var.c_str())) {
            const SweepVariable v = parse_sweep_variable(str(var.c_str()));
            if (v != a.var && !(has(lo.c_str()) && has(hi.c_str())))
                throw ValidationError("changing '" + var + "' needs '" + lo + "' and '" + hi + "'");
            a.var = v;
        }
        if (has(lo.c_str())) a.min = num(lo.c_str());
        if (has(hi.c_str())) a.max = num(hi.c_str());
        if (has(n.c_str())) a.points = integer(n.c_str());
    };
    if (grid_cmd && !s.axes.empty()) apply_axis(s.axes[0], "");
    if (grid_cmd && s.axes.size() > 1) apply_axis(s.axes[1], "2");
    if (has("tau_max")) s.tau_max = num("tau_max");
    if (has("tau_points")) s.tau_points = integer("tau_points");

    if (has("numeric")) s.numeric = kv.at("numeric").get<bool>();
    if (has("analytic")) s.analytic = kv.at("analytic").get<bool>();
    if (has("convergence")) s.convergence = kv.at("convergence").get<bool>();

    if (has("format")) cfg.format = parse_format(str("format"));
    if (has("out")) cfg.out = str("out");
    if (has("kappa_hz")) {
        if (!(num("kappa_hz") > 0.0)) throw ValidationError("kappa_hz must be positive");
        cfg.kappa_hz = num("kappa_hz");
    }

    if (cmd == Command::eigen) {
        p.validate();
        if (uses_phonon(model) != s.space.has_phonon())
            throw ValidationError(std::string("model ") + to_string(model) +
                                  (uses_phonon(model) ? " needs a phonon cutoff >= 1" : " takes no phonon mode"));
    } else {
        s.validate();
    }
    return cfg;
}

inline RunConfig parse_config(Command cmd, const std::optional<std::string>& config_path,
                              const std::vector<std::pair<std::string, std::string>>& flags) {
    const json file = config_path ? load_config_file(*config_path) : json::object();
    json over = json::object();
    for (const auto& [k, v] : flags) over[k] = coerce_flag(k, v);
    return resolve_config(cmd, file, over);
}

// Everything needed to repeat the run; loadable as a config file.
inline json manifest(const RunConfig& cfg) {
    const SweepSpec& s = cfg.spec;
    const ModelParams p = s.resolved_base();
    json m;
    m["artifact_version"] = kArtifactVersion;
    m["command"] = to_string(cfg.command);
    if (cfg.command == Command::preset) m["preset"] = cfg.preset;
    m["model"] = to_string(s.model);
    m["delta_c"] = p.delta_c;
    m["delta_a"] = p.delta_a;
    m["g"] = p.g;
    m["omega"] = p.omega;
    m["kappa"] = p.kappa;
    m["gamma"] = p.gamma;
    if (uses_phonon(s.model)) {
        m["nu"] = p.nu;
        m["Gamma"] = p.Gamma;
    }
    m["photon_cutoff"] = s.space.photon_cutoff();
    m["phonon_cutoff"] = s.space.phonon_cutoff();
    if (cfg.command != Command::eigen) {
        m["link"] = to_string(s.link);
        const char* suffix[] = {"", "2"};
        for (std::size_t i = 0; i < s.axes.size(); ++i) {
            const std::string sx = suffix[i];
            m["var" + sx] = to_string(s.axes[i].var);
            m["min" + sx] = s.axes[i].min;
            m["max" + sx] = s.axes[i].max;
            m["points" + sx] = s.axes[i].points;
        }
        if (s.kind == SweepKind::g2tau) {
            m["tau_max"] = s.tau_max;
            m["tau_points"] = s.tau_points;
        }
        m["numeric"] = s.numeric;
        m["analytic"] = s.analytic;
        m["convergence"] = s.convergence;
    }
    m["format"] = to_string(cfg.format);
    if (cfg.kappa_hz) m["kappa_hz"] = *cfg.kappa_hz;
    return m;
}

using Cell = std::variant<std::monostate, double, long long, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    int column(std::string_view name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return static_cast<int>(i);
        return -1;
    }
};

namespace detail {

inline Cell cell(const std::optional<double>& v) {
    if (v && std::isfinite(*v)) return *v;
    return std::monostate{};
}

inline std::optional<double> safe_log10(const std::optional<double>& v) {
    if (v && *v > 0.0) return std::log10(*v);
    return std::nullopt;
}

// Detuning set by the link rule rather than by an axis, if any.
inline std::optional<SweepVariable> linked_column(const SweepSpec& s) {
    auto on_axis = [&](SweepVariable v) {
        return std::any_of(s.axes.begin(), s.axes.end(), [v](const Axis& a) { return a.var == v; });
    };
    switch (s.link) {
    case Link::none: return std::nullopt;
    case Link::hold_delta_tilde: return on_axis(SweepVariable::delta_a) ? SweepVariable::delta_c : SweepVariable::delta_a;
    case Link::com_resonance: return SweepVariable::delta_c;
    case Link::com_hold_nu: return SweepVariable::delta_a;
    }
    return std::nullopt;
}

} // namespace detail

inline Table sweep_table(const SweepResult& r) {
    Table t;
    const SweepSpec& s = r.spec;
    for (const auto& a : s.axes) t.columns.emplace_back(to_string(a.var));
    const auto linked = detail::linked_column(s);
    if (linked) t.columns.emplace_back(to_string(*linked));
    for (const char* c : {"nbar_num", "g2_num", "nbar_ana", "g2_ana"}) t.columns.emplace_back(c);
    const bool heat = s.kind == SweepKind::heatmap;
    if (heat) {
        t.columns.emplace_back("log10_g2_num");
        t.columns.emplace_back("log10_g2_ana");
    }
    for (const char* c : {"residual", "truncation_delta", "error"}) t.columns.emplace_back(c);

    t.rows.reserve(r.rows.size());
    for (const auto& row : r.rows) {
        std::vector<Cell> out;
        out.reserve(t.columns.size());
        for (double c : row.coords) out.emplace_back(c);
        if (linked) {
            ModelParams p = row.params;
            out.emplace_back(param_ref(p, *linked));
        }
        const PointResult& pr = row.result;
        for (const auto& v : {pr.nbar_num, pr.g2_num, pr.nbar_ana, pr.g2_ana}) out.push_back(detail::cell(v));
        if (heat) {
            out.push_back(detail::cell(detail::safe_log10(pr.g2_num)));
            out.push_back(detail::cell(detail::safe_log10(pr.g2_ana)));
        }
        out.push_back(detail::cell(pr.residual));
        out.push_back(detail::cell(pr.truncation_delta));
        out.emplace_back(pr.error);
        t.rows.push_back(std::move(out));
    }
    return t;
}

inline Table g2tau_table(const G2TauResult& r) {
    Table t;
    t.columns = {"tau", "g2_regression", "g2_amplitude"};
    const auto tau = r.spec.tau_grid();
    for (std::size_t i = 0; i < tau.size(); ++i) {
        std::vector<Cell> row{tau[i]};
        row.push_back(r.regression ? Cell(r.regression->values[i]) : Cell{});
        row.push_back(r.amplitude ? Cell(r.amplitude->values[i]) : Cell{});
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline json g2tau_summary(const G2TauResult& r) {
    json s = json::object();
    auto verdict = [](const SchwarzVerdict& v) {
        return json{{"violated", v.violated}, {"tau", v.tau}, {"excess", v.excess}};
    };
    if (r.regression) {
        s["g2_zero_regression"] = r.regression->g2_zero;
        s["schwarz_regression"] = verdict(*r.regression_verdict);
    }
    if (r.amplitude) {
        s["g2_zero_amplitude"] = r.amplitude->g2_zero;
        s["schwarz_amplitude"] = verdict(*r.amplitude_verdict);
    }
    if (r.nbar_num) s["nbar_num"] = *r.nbar_num;
    if (r.residual) s["residual"] = *r.residual;
    if (r.truncation_delta) s["truncation_delta"] = *r.truncation_delta;
    s["schwarz_threshold"] = kSchwarzReportThreshold;
    if (!r.ok()) s["error"] = r.error;
    return s;
}

// Closed-form dressed energies against the dense spectrum of the drive-free Hamiltonian.
inline Table eigen_table(const RunConfig& cfg) {
    const SweepSpec& s = cfg.spec;
    ModelParams p = s.base;
    p.omega = 0.0;
    const ComplexMatrix h = build_hamiltonian(s.model, p, s.space);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd spectrum = es.eigenvalues();

    Table t;
    t.columns = {"model", "n", "branch", "energy_closed", "energy_numeric", "residual"};
    for (int n = 1; n <= s.space.photon_cutoff(); ++n) {
        const auto levels = s.model == Model::jc ? jc_dressed_levels(n, p, s.space) : com_dressed_levels(n, p, s.space);
        for (const DressedLevel& lvl : {levels.first, levels.second}) {
            Eigen::Index nearest = 0;
            (spectrum.array() - lvl.energy).abs().minCoeff(&nearest);
            const double residual = (h * lvl.state - lvl.energy * lvl.state).cwiseAbs().maxCoeff();
            t.rows.push_back({std::string(to_string(s.model)), static_cast<long long>(n),
                              std::string(lvl.branch == Branch::plus ? "+" : "-"), lvl.energy, spectrum(nearest),
                              residual});
        }
    }
    return t;
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17e", v);
    return buf;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

inline std::string to_csv(const Table& t) {
    std::ostringstream os;
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_field(t.columns[i]);
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            std::visit(
                [&os](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) os << format_double(v);
                    else if constexpr (std::is_same_v<T, long long>) os << v;
                    else if constexpr (std::is_same_v<T, std::string>) os << csv_field(v);
                },
                row[i]);
        }
        os << '\n';
    }
    return os.str();
}

// Rows become objects; empty cells are null and an empty error field is left out.
inline json to_json(const Table& t, const json& manifest_obj, const json& summary) {
    json doc;
    doc["manifest"] = manifest_obj;
    if (!summary.empty()) doc["summary"] = summary;
    doc["columns"] = t.columns;
    json rows = json::array();
    for (const auto& row : t.rows) {
        json obj = json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            const std::string& name = t.columns[i];
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, std::monostate>) obj[name] = nullptr;
                    else if constexpr (std::is_same_v<T, std::string>) {
                        if (name != "error" || !v.empty()) obj[name] = v;
                    } else obj[name] = v;
                },
                row[i]);
        }
        rows.push_back(std::move(obj));
    }
    doc["rows"] = std::move(rows);
    return doc;
}

struct RunOutput {
    Table table;
    json summary = json::object();
    bool ok{true};
};

inline RunOutput execute(const RunConfig& cfg) {
    RunOutput out;
    if (cfg.command == Command::eigen) {
        out.table = eigen_table(cfg);
        return out;
    }
    switch (cfg.spec.kind) {
    case SweepKind::sweep:
    case SweepKind::heatmap: {
        const SweepResult r = run_grid(cfg.spec);
        out.table = sweep_table(r);
        std::size_t failed = 0;
        for (const auto& row : r.rows) failed += row.result.ok() ? 0 : 1;
        out.summary["points"] = r.rows.size();
        out.summary["failed"] = failed;
        out.ok = failed == 0;
        break;
    }
    case SweepKind::g2tau: {
        const G2TauResult r = run_g2tau(cfg.spec);
        out.table = g2tau_table(r);
        out.summary = g2tau_summary(r);
        out.ok = r.ok();
        break;
    }
    }
    return out;
}

inline std::string render(const RunConfig& cfg, const RunOutput& out) {
    if (cfg.format == Format::csv) return to_csv(out.table);
    return to_json(out.table, manifest(cfg), out.summary).dump(2) + "\n";
}

// A gnuplot one-liner for CSV output written to `path`.
inline std::string gnuplot_hint(const RunConfig& cfg, const Table& t, const std::string& path) {
    auto col = [&](std::string_view name) { return std::to_string(t.column(name) + 1); };
    const std::string head = "gnuplot -p -e \"set datafile separator ','; set key autotitle columnhead; ";
    if (cfg.command == Command::eigen)
        return head + "plot '" + path + "' using " + col("n") + ":" + col("energy_numeric") + " with points\"";
    switch (cfg.spec.kind) {
    case SweepKind::heatmap:
        return head + "set view map; splot '" + path + "' using 1:2:" + col("log10_g2_num") + " with image\"";
    case SweepKind::g2tau:
        return head + "plot '" + path + "' using 1:2 with lines, '' using 1:3 with lines\"";
    case SweepKind::sweep: break;
    }
    return head + "set logscale y; plot '" + path + "' using 1:" + col("g2_num") + " with lines, '' using 1:" +
           col("g2_ana") + " with lines\"";
}

} // namespace photonstats
