#include "gravchan/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "gravchan/errors.hpp"
#include "gravchan/optimize.hpp"
#include "gravchan/protocol.hpp"

namespace gravchan::cli {

using nlohmann::json;

namespace {

void require_object(const json& j, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
}

void reject_unknown(const json& j, const std::string& where, std::set<std::string> allowed) {
    for (const auto& [key, value] : j.items()) {
        if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

double read_number(const json& j, const std::string& key, const std::string& where,
                   double fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(where + "." + key + " must be finite");
    return x;
}

std::uint64_t read_count(const json& j, const std::string& key, const std::string& where,
                         std::uint64_t fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                   v.get<std::int64_t>() < 0)) {
        throw ConfigError(where + "." + key + " must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

bool read_bool(const json& j, const std::string& key, const std::string& where, bool fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_boolean()) throw ConfigError(where + "." + key + " must be a boolean");
    return j.at(key).get<bool>();
}

std::optional<std::string> read_string(const json& j, const std::string& key,
                                       const std::string& where) {
    if (!j.contains(key)) return std::nullopt;
    if (!j.at(key).is_string()) throw ConfigError(where + "." + key + " must be a string");
    return j.at(key).get<std::string>();
}

// A complex amplitude is either a real number or [re, im].
Complex read_amplitude(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError(where + "." + key + " is required");
    const auto& v = j.at(key);
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        return {v[0].get<double>(), v[1].get<double>()};
    }
    throw ConfigError(where + "." + key + " must be a number or [re, im]");
}

InterferometerParams parse_interferometer(const json& j) {
    const std::string where = "interferometer";
    require_object(j, where);
    reject_unknown(j, where, {"k", "T", "g0", "gamma_per_m_in_g", "gradient_correction", "phases"});
    InterferometerParams p;
    p.timing.k = read_number(j, "k", where, 1.61e7);
    p.timing.T = read_number(j, "T", where, 0.1);
    p.gravity.g0 = read_number(j, "g0", where, 9.8);
    // Gradient quoted as a fraction of g per metre; the library wants s^-2.
    p.gravity.gamma = read_number(j, "gamma_per_m_in_g", where, 0.0) * p.gravity.g0;
    p.gradient_correction = read_bool(j, "gradient_correction", where, false);
    if (j.contains("phases")) {
        const auto& ph = j.at("phases");
        if (!ph.is_array() || ph.size() != 3 ||
            !std::all_of(ph.begin(), ph.end(), [](const json& x) { return x.is_number(); })) {
            throw ConfigError("interferometer.phases must be three numbers");
        }
        p.phases = {ph[0].get<double>(), ph[1].get<double>(), ph[2].get<double>()};
    }
    try {
        p.validate();
    } catch (const gravchan::Error& e) {
        throw ConfigError(std::string("interferometer: ") + e.what());
    }
    return p;
}

ChannelSpec parse_channel(const json& j) {
    const std::string where = "channel";
    require_object(j, where);
    const auto type = read_string(j, "type", where);
    if (!type) throw ConfigError("channel.type is required");
    ChannelSpec spec;
    if (*type == "bell") {
        reject_unknown(j, where, {"type"});
        spec = BellChannel{};
    } else if (*type == "general") {
        reject_unknown(j, where, {"type", "a", "b"});
        spec = GeneralChannel{read_amplitude(j, "a", where), read_amplitude(j, "b", where)};
    } else if (*type == "cat") {
        reject_unknown(j, where, {"type", "atoms"});
        spec = CatChannel{static_cast<std::size_t>(read_count(j, "atoms", where, 3))};
    } else if (*type == "classical_mixture") {
        reject_unknown(j, where, {"type"});
        spec = ClassicalMixtureChannel{};
    } else {
        throw ConfigError("channel.type must be bell, general, cat or classical_mixture");
    }
    try {
        validate(spec);
    } catch (const gravchan::Error& e) {
        throw ConfigError(std::string("channel: ") + e.what());
    }
    return spec;
}

std::vector<double> parse_scan(const json& j) {
    const std::string where = "scan";
    require_object(j, where);
    reject_unknown(j, where, {"delta_phi", "start", "stop", "points"});
    std::vector<double> grid;
    if (j.contains("delta_phi")) {
        if (j.contains("start") || j.contains("stop") || j.contains("points")) {
            throw ConfigError("scan takes either delta_phi or start/stop/points");
        }
        const auto& list = j.at("delta_phi");
        if (!list.is_array()) throw ConfigError("scan.delta_phi must be an array");
        for (const auto& v : list) {
            if (!v.is_number() || !std::isfinite(v.get<double>())) {
                throw ConfigError("scan.delta_phi entries must be finite numbers");
            }
            grid.push_back(v.get<double>());
        }
    } else {
        const double start = read_number(j, "start", where, 0.0);
        const double stop = read_number(j, "stop", where, 2.0 * std::numbers::pi);
        const auto points = read_count(j, "points", where, 0);
        for (std::uint64_t i = 0; i < points; ++i) {
            grid.push_back(start + (stop - start) * static_cast<double>(i) /
                                       static_cast<double>(points));
        }
    }
    if (grid.empty()) throw ConfigError("scan grid is empty");
    return grid;
}

NoiseParams parse_noise(const json& j) {
    const std::string where = "noise";
    require_object(j, where);
    reject_unknown(j, where,
                   {"n_atoms", "c", "delta_phi_mean", "n_runs", "dominance_weight",
                    "channel_amplitude"});
    NoiseParams p;
    p.n_atoms = read_count(j, "n_atoms", where, p.n_atoms);
    p.c = read_number(j, "c", where, p.c);
    p.delta_phi_mean = read_number(j, "delta_phi_mean", where, p.delta_phi_mean);
    p.n_runs = static_cast<std::size_t>(read_count(j, "n_runs", where, p.n_runs));
    p.dominance_weight = read_number(j, "dominance_weight", where, p.dominance_weight);
    if (j.contains("channel_amplitude")) {
        p.channel_amplitude = read_number(j, "channel_amplitude", where, 0.0);
    }
    try {
        p.validate();
    } catch (const gravchan::Error& e) {
        throw ConfigError(std::string("noise: ") + e.what());
    }
    if (std::abs(std::sin(p.delta_phi_mean)) <= 0.1) {
        throw ConfigError("noise.delta_phi_mean is too close to a fringe extremum");
    }
    return p;
}

std::string channel_name(const ChannelSpec& spec) {
    switch (spec.index()) {
        case 0: return "bell";
        case 1: return "general";
        case 2: return "cat";
        default: return "classical_mixture";
    }
}

json amplitudes_json(const PureState& state) {
    json out = json::array();
    for (const auto& [ket, value] : state.amplitudes()) {
        out.push_back({{"ket", to_string(ket)}, {"re", value.real()}, {"im", value.imag()}});
    }
    return out;
}

json estimate_json(const Estimate& e) {
    return {{"estimate", e.value}, {"standard_error", e.standard_error}};
}

json result_json(const OptimizationResult& r) {
    return {{"a_star", r.a_star},
            {"b_star", r.b_star},
            {"objective", r.objective_value},
            {"iterations", r.iterations},
            {"bracket", {r.bracket_lo, r.bracket_hi}},
            {"method", r.method}};
}

json summary_header(const std::string& command, const RunConfig& config) {
    return {{"command", command},
            {"schema_version", kConfigSchemaVersion},
            {"config", config.document}};
}

void emit_summary(const RunConfig& config, const json& summary, std::ostream& out) {
    const std::string text = summary.dump(2) + "\n";
    if (config.json_path) {
        write_atomically(*config.json_path, text);
    } else {
        out << text;
    }
}

}  // namespace

RunConfig parse_config(const json& document) {
    require_object(document, "config");
    reject_unknown(document, "config",
                   {"schema_version", "seed", "interferometer", "channel", "remote_atom", "scan",
                    "noise", "optimize", "output"});
    RunConfig c;
    if (document.contains("schema_version") &&
        read_count(document, "schema_version", "config", 0) != kConfigSchemaVersion) {
        throw ConfigError("unsupported schema_version");
    }
    c.seed = read_count(document, "seed", "config", c.seed);
    if (document.contains("interferometer")) {
        c.interferometer = parse_interferometer(document.at("interferometer"));
    } else {
        c.interferometer = parse_interferometer(json::object());
    }
    if (document.contains("channel")) c.channel = parse_channel(document.at("channel"));
    c.remote_atom = static_cast<std::size_t>(read_count(document, "remote_atom", "config", 0));
    if (c.remote_atom + 1 >= atom_count(c.channel)) {
        throw ConfigError("remote_atom must index a non-probe atom");
    }
    if (document.contains("scan")) c.delta_phi_grid = parse_scan(document.at("scan"));
    c.noise = parse_noise(document.value("noise", json::object()));
    c.noise.seed = c.seed;
    if (document.contains("optimize")) {
        const auto& o = document.at("optimize");
        require_object(o, "optimize");
        reject_unknown(o, "optimize", {"tolerance", "grid_size"});
        c.tolerance = read_number(o, "tolerance", "optimize", c.tolerance);
        c.entropy_grid =
            static_cast<std::size_t>(read_count(o, "grid_size", "optimize", c.entropy_grid));
    }
    if (!(c.tolerance > 0.0)) throw ConfigError("optimize.tolerance must be > 0");
    if (c.entropy_grid == 0) throw ConfigError("optimize.grid_size must be > 0");
    if (document.contains("output")) {
        const auto& o = document.at("output");
        require_object(o, "output");
        reject_unknown(o, "output", {"csv", "json"});
        c.csv_path = read_string(o, "csv", "output");
        c.json_path = read_string(o, "json", "output");
    }
    c.document = document;
    return c;
}

json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("malformed JSON in " + path.string() + ": " + e.what());
    }
}

void write_atomically(const std::filesystem::path& path, const std::string& contents) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out << contents;
        out.flush();
        if (!out) throw IoError("failed writing " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move output into " + path.string());
    }
}

std::string format_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string fringe_csv(const RunConfig& config, json& summary) {
    std::vector<double> grid = config.delta_phi_grid;
    if (grid.empty()) grid.push_back(total_phase(config.interferometer));

    const auto channel = fringe_scan(config.channel, config.interferometer, grid, config.remote_atom);
    const auto direct = direct_scan(config.interferometer, grid);

    std::ostringstream csv;
    csv << "delta_phi_rad,p_direct,p_channel_joint_g,p_channel_closed_form,abs_error\n";
    double max_error = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& o = channel[i].outcome;
        const double err = std::abs(o.p_joint_g - o.p_closed_form);
        max_error = std::max(max_error, err);
        csv << format_number(grid[i]) << ',' << format_number(direct[i]) << ','
            << format_number(o.p_joint_g) << ',' << format_number(o.p_closed_form) << ','
            << format_number(err) << '\n';
    }
    summary["channel"] = channel_name(config.channel);
    summary["points"] = grid.size();
    summary["max_abs_error"] = max_error;
    return csv.str();
}

std::string noise_csv(const RunConfig& config, json& summary) {
    const NoiseReport r = snr_report(config.noise);

    std::ostringstream csv;
    csv << "metric,closed_form,mc_estimate,mc_standard_error\n";
    auto row = [&](const std::string& name, double closed, const Estimate& mc) {
        csv << name << ',' << format_number(closed) << ',' << format_number(mc.value) << ','
            << format_number(mc.standard_error) << '\n';
    };
    row("shot_no_channel", r.shot_no_channel, r.mc_shot_no_channel);
    row("shot_with_channel", r.shot_with_channel, r.mc_shot_with_channel);
    row("shot_with_channel_naive", r.shot_with_channel_naive, r.mc_shot_with_channel_naive);
    row("phase_no_channel", r.phase_no_channel, r.mc_phase_no_channel);
    row("phase_with_channel", r.phase_with_channel, r.mc_phase_with_channel);
    row("phase_ratio", r.phase_ratio, r.mc_phase_ratio);
    if (r.phase_ratio_general) row("phase_ratio_general", *r.phase_ratio_general,
                                   *r.mc_phase_ratio_general);

    summary["seed"] = config.seed;
    summary["shot_ratio"] = r.shot_ratio;
    summary["phase_ratio"] = r.phase_ratio;
    if (r.phase_ratio_general) summary["phase_ratio_general"] = *r.phase_ratio_general;
    summary["closed_form"] = {{"shot_no_channel", r.shot_no_channel},
                              {"shot_with_channel", r.shot_with_channel},
                              {"shot_with_channel_naive", r.shot_with_channel_naive},
                              {"phase_no_channel", r.phase_no_channel},
                              {"phase_with_channel", r.phase_with_channel}};
    json mc = {{"shot_no_channel", estimate_json(r.mc_shot_no_channel)},
               {"shot_with_channel", estimate_json(r.mc_shot_with_channel)},
               {"shot_with_channel_naive", estimate_json(r.mc_shot_with_channel_naive)},
               {"phase_no_channel", estimate_json(r.mc_phase_no_channel)},
               {"phase_with_channel", estimate_json(r.mc_phase_with_channel)},
               {"phase_ratio", estimate_json(r.mc_phase_ratio)}};
    if (r.mc_phase_ratio_general) mc["phase_ratio_general"] = estimate_json(*r.mc_phase_ratio_general);
    summary["monte_carlo"] = mc;
    summary["combined"] = {{"dominance_weight", r.dominance_weight},
                           {"no_channel", r.combined_no_channel},
                           {"with_channel", r.combined_with_channel},
                           {"ratio", r.combined_ratio},
                           {"channel_improves", r.channel_improves}};
    summary["notes"] = {
        "shot_with_channel uses the atom-loss model (N/2 atoms reach readout); "
        "shot_with_channel_naive propagates Bin(N, (1+cos)/4) directly and is not a constant "
        "multiple of 1/sqrt(N)",
        "phase-noise Monte Carlo samples variance c^2 w (1+cos<dphi>)/2, whose spread is "
        "c sqrt(w)|cos(<dphi>/2)|; the closed form c|sin(<dphi>/2)| agrees with it at pi/2"};
    return csv.str();
}

json optimize_summary(const RunConfig& config) {
    const auto entropy = optimize_entropy(config.tolerance, config.entropy_grid);
    const auto png = png_ratio_extremum();
    return {{"tolerance", config.tolerance},
            {"entropy_grid", config.entropy_grid},
            {"a_star_entropy", entropy.a_star},
            {"a_star_png", png.a_star},
            {"entropy", result_json(entropy)},
            {"png_ratio", result_json(png)}};
}

json prepare_summary(const RunConfig& config) {
    json out{{"channel", channel_name(config.channel)}};
    const ChannelState target = make_channel(config.channel);

    std::optional<BellPreparation> prep;
    if (std::holds_alternative<BellChannel>(config.channel)) {
        prep = BellPreparation{};
    } else if (const auto* g = std::get_if<GeneralChannel>(&config.channel)) {
        prep = general_preparation(g->a, g->b);
    }

    if (prep) {
        const CavityState cavity = run_cavity_preparation(*prep);
        const PureState prepared = prepare_bell(*prep);
        const PureState& ideal = std::get<PureState>(target);
        out["amplitudes"] = amplitudes_json(prepared);
        out["norm"] = std::sqrt(prepared.norm_squared());
        out["target_amplitudes"] = amplitudes_json(ideal);
        out["target_fidelity"] = fidelity(prepared, ideal);
        out["cavity"] = {{"prepared", true},
                         {"omega_t1", prep->omega_t1},
                         {"omega_t2", prep->omega_t2},
                         {"coupling_phase1", prep->coupling_phase1},
                         {"coupling_phase2", prep->coupling_phase2},
                         {"residual_photon_population", cavity.photon_population()}};
    } else if (const auto* pure = std::get_if<PureState>(&target)) {
        out["amplitudes"] = amplitudes_json(*pure);
        out["norm"] = std::sqrt(pure->norm_squared());
        out["target_fidelity"] = 1.0;
        out["cavity"] = {{"prepared", false}};
    } else {
        json members = json::array();
        for (const auto& m : std::get<Ensemble>(target).members()) {
            members.push_back({{"weight", m.weight}, {"amplitudes", amplitudes_json(m.state)}});
        }
        out["members"] = members;
        out["cavity"] = {{"prepared", false}};
    }
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gravitational-information transfer through an entangled-atom channel", "gravchan"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> csv_out;
    std::optional<std::string> summary_out;
    std::optional<std::uint64_t> seed;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_option("--summary", summary_out, "write the JSON summary here");
    };
    auto* fringe = app.add_subcommand("fringe", "direct vs channel fringe scan to CSV");
    add_common(fringe);
    fringe->add_option("--out", csv_out, "CSV output path");
    auto* noise = app.add_subcommand("noise", "shot/phase noise report (CSV + JSON)");
    add_common(noise);
    noise->add_option("--out", csv_out, "CSV output path");
    noise->add_option("--seed", seed, "Monte Carlo seed");
    auto* optimize = app.add_subcommand("optimize", "optimal channel amplitude");
    add_common(optimize);
    auto* prepare = app.add_subcommand("prepare", "cavity preparation of the channel");
    add_common(prepare);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, e2;
        const int code = app.exit(e, o, e2);
        out << o.str();
        err << e2.str();
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        json document = load_json(config_path);
        if (!document.is_object()) throw ConfigError("config must be a JSON object");
        if (seed) document["seed"] = *seed;
        if (csv_out) document["output"]["csv"] = *csv_out;
        if (summary_out) document["output"]["json"] = *summary_out;
        const RunConfig config = parse_config(document);

        if (fringe->parsed()) {
            json summary = summary_header("fringe", config);
            const std::string path = config.csv_path.value_or("fringe.csv");
            const std::string csv = fringe_csv(config, summary);
            write_atomically(path, csv);
            summary["csv"] = path;
            emit_summary(config, summary, out);
        } else if (noise->parsed()) {
            json summary = summary_header("noise", config);
            const std::string path = config.csv_path.value_or("noise.csv");
            const std::string csv = noise_csv(config, summary);
            write_atomically(path, csv);
            summary["csv"] = path;
            emit_summary(config, summary, out);
        } else if (optimize->parsed()) {
            json summary = summary_header("optimize", config);
            summary.update(optimize_summary(config));
            emit_summary(config, summary, out);
        } else if (prepare->parsed()) {
            json summary = summary_header("prepare", config);
            summary.update(prepare_summary(config));
            emit_summary(config, summary, out);
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

}  // namespace gravchan::cli
