#include "zeno_otto/experiments.hpp"

#include "zeno_otto/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>

namespace zeno_otto {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
using ordered_json = nlohmann::ordered_json;

std::vector<double> lin_grid(double from, double to, double step) {
    std::vector<double> out;
    const long n = std::lround(std::floor((to - from) / step + 1e-9));
    for (long k = 0; k <= n; ++k) out.push_back(from + static_cast<double>(k) * step);
    return out;
}

DensityOperator gibbs_cold(const EngineParams& p) { return thermal_state(h_cold(p), p.t_c); }
DensityOperator gibbs_hot(const EngineParams& p) { return thermal_state(h_hot(p), p.t_h); }

DensityOperator joint_initial(const EngineParams& p, const DensityOperator& rho_s) {
    return DensityOperator(tensor_product(rho_s.matrix(), lubricant_initial_state(p)));
}

std::string col_suffix(double v) {
    std::string s = format_double(v);
    for (char& c : s)
        if (c == '.') c = 'p';
    return s;
}

}  // namespace

const char* profile_name(Profile p) { return p == Profile::Desk ? "desk" : "full"; }

const char* drive_mode_name(DriveMode m) {
    switch (m) {
        case DriveMode::Bare: return "bare";
        case DriveMode::StrongCoupling: return "strong_coupling";
        case DriveMode::CounterDiabatic: return "counter_diabatic";
        case DriveMode::ZenoMonitored: return "zeno";
    }
    return "?";
}

const char* basis_name(MeasurementBasis b) {
    return b == MeasurementBasis::X ? "x" : "computational";
}

DriveMode parse_drive_mode(const std::string& s) {
    if (s == "bare") return DriveMode::Bare;
    if (s == "strong_coupling") return DriveMode::StrongCoupling;
    if (s == "counter_diabatic") return DriveMode::CounterDiabatic;
    if (s == "zeno") return DriveMode::ZenoMonitored;
    throw ConfigError("config field 'drive_mode': unknown value '" + s +
                      "' (expected bare|strong_coupling|counter_diabatic|zeno)");
}

MeasurementBasis parse_basis(const std::string& s) {
    if (s == "x") return MeasurementBasis::X;
    if (s == "computational") return MeasurementBasis::Computational;
    throw ConfigError("config field 'measurement_basis': unknown value '" + s +
                      "' (expected x|computational)");
}

// ---------------------------------------------------------------------------
// Config parsing (strict: unknown keys rejected, errors name the field path)
// ---------------------------------------------------------------------------

namespace {

void check_keys(const ordered_json& obj, const std::string& where,
                const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw ConfigError("config: unknown field '" + (where.empty() ? it.key() : where + "." + it.key()) + "'");
        }
    }
}

double get_number(const ordered_json& obj, const std::string& where, const char* key,
                  double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) {
        throw ConfigError("config field '" + where + key + "': expected a number");
    }
    return obj[key].get<double>();
}

int get_int(const ordered_json& obj, const std::string& where, const char* key, int fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer()) {
        throw ConfigError("config field '" + where + key + "': expected an integer");
    }
    return obj[key].get<int>();
}

std::uint64_t get_u64(const ordered_json& obj, const std::string& where, const char* key,
                      std::uint64_t fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj[key];
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
        throw ConfigError("config field '" + where + key + "': expected an unsigned integer");
    }
    return v.get<std::uint64_t>();
}

EngineParams parse_params(const ordered_json& obj) {
    EngineParams p;
    check_keys(obj, "params",
               {"omega", "omega0", "omega_l", "gamma_comp", "gamma_exp", "gamma_h", "gamma_c",
                "t_h", "t_c", "tau_comp", "tau_hot", "tau_exp", "tau_cold", "n_meas", "n_traj",
                "nu", "beta_reset", "lubricant_plus_weight", "master_seed"});
    const std::string w = "params.";
    p.omega = get_number(obj, w, "omega", p.omega);
    p.omega0 = get_number(obj, w, "omega0", p.omega0);
    p.omega_l = get_number(obj, w, "omega_l", p.omega_l);
    p.gamma_comp = get_number(obj, w, "gamma_comp", p.gamma_comp);
    p.gamma_exp = get_number(obj, w, "gamma_exp", p.gamma_exp);
    p.gamma_h = get_number(obj, w, "gamma_h", p.gamma_h);
    p.gamma_c = get_number(obj, w, "gamma_c", p.gamma_c);
    p.t_h = get_number(obj, w, "t_h", p.t_h);
    p.t_c = get_number(obj, w, "t_c", p.t_c);
    p.tau_comp = get_number(obj, w, "tau_comp", p.tau_comp);
    p.tau_hot = get_number(obj, w, "tau_hot", p.tau_hot);
    p.tau_exp = get_number(obj, w, "tau_exp", p.tau_exp);
    p.tau_cold = get_number(obj, w, "tau_cold", p.tau_cold);
    p.n_meas = get_int(obj, w, "n_meas", p.n_meas);
    p.n_traj = get_int(obj, w, "n_traj", p.n_traj);
    p.nu = get_number(obj, w, "nu", p.nu);
    p.beta_reset = get_number(obj, w, "beta_reset", p.beta_reset);
    p.lubricant_plus_weight = get_number(obj, w, "lubricant_plus_weight", p.lubricant_plus_weight);
    p.master_seed = get_u64(obj, w, "master_seed", p.master_seed);
    return p;
}

const std::set<std::string> kSweepable = {
    "omega",   "omega0",  "omega_l", "gamma",    "gamma_comp", "gamma_exp",
    "gamma_h", "gamma_c", "t_h",     "t_c",      "tau_comp",   "tau_hot",
    "tau_exp", "tau_cold", "n_meas", "n_traj",   "nu",         "beta_reset",
    "lubricant_plus_weight"};

void set_param(EngineParams& p, const std::string& name, double value) {
    if (name == "omega") p.omega = value;
    else if (name == "omega0") p.omega0 = value;
    else if (name == "omega_l") p.omega_l = value;
    else if (name == "gamma") p.gamma_comp = p.gamma_exp = value;
    else if (name == "gamma_comp") p.gamma_comp = value;
    else if (name == "gamma_exp") p.gamma_exp = value;
    else if (name == "gamma_h") p.gamma_h = value;
    else if (name == "gamma_c") p.gamma_c = value;
    else if (name == "t_h") p.t_h = value;
    else if (name == "t_c") p.t_c = value;
    else if (name == "tau_comp") p.tau_comp = value;
    else if (name == "tau_hot") p.tau_hot = value;
    else if (name == "tau_exp") p.tau_exp = value;
    else if (name == "tau_cold") p.tau_cold = value;
    else if (name == "n_meas") p.n_meas = static_cast<int>(std::llround(value));
    else if (name == "n_traj") p.n_traj = static_cast<int>(std::llround(value));
    else if (name == "nu") p.nu = value;
    else if (name == "beta_reset") p.beta_reset = value;
    else if (name == "lubricant_plus_weight") p.lubricant_plus_weight = value;
    else throw ConfigError("sweep: unknown parameter name '" + name + "'");
}

SweepSpec parse_sweep_entry(const ordered_json& obj, size_t index) {
    const std::string where = "sweep[" + std::to_string(index) + "]";
    if (!obj.is_object()) throw ConfigError("config field '" + where + "': expected an object");
    check_keys(obj, where, {"param", "values", "from", "to", "step"});
    if (!obj.contains("param") || !obj["param"].is_string()) {
        throw ConfigError("config field '" + where + ".param': expected a string");
    }
    SweepSpec spec;
    spec.param = obj["param"].get<std::string>();
    if (!kSweepable.count(spec.param)) {
        throw ConfigError("config field '" + where + ".param': '" + spec.param +
                          "' is not a sweepable EngineParams field");
    }
    if (obj.contains("values")) {
        if (!obj["values"].is_array() || obj["values"].empty()) {
            throw ConfigError("config field '" + where + ".values': expected a non-empty array");
        }
        for (const auto& v : obj["values"]) {
            if (!v.is_number()) throw ConfigError("config field '" + where + ".values': expected numbers");
            spec.values.push_back(v.get<double>());
        }
    } else {
        const double from = get_number(obj, where + ".", "from", kNaN);
        const double to = get_number(obj, where + ".", "to", kNaN);
        const double step = get_number(obj, where + ".", "step", kNaN);
        if (std::isnan(from) || std::isnan(to) || std::isnan(step) || step <= 0.0 || to < from) {
            throw ConfigError("config field '" + where + "': need values or from/to/step with step > 0");
        }
        spec.values = lin_grid(from, to, step);
    }
    return spec;
}

PropagationSettings parse_propagation(const ordered_json& obj) {
    PropagationSettings s;
    check_keys(obj, "propagation",
               {"substeps_per_unit_time", "lindblad_step", "grid_points_for_suprema"});
    s.substeps_per_unit_time =
        get_int(obj, "propagation.", "substeps_per_unit_time", s.substeps_per_unit_time);
    s.lindblad_step = get_number(obj, "propagation.", "lindblad_step", s.lindblad_step);
    s.grid_points_for_suprema =
        get_int(obj, "propagation.", "grid_points_for_suprema", s.grid_points_for_suprema);
    return s;
}

ordered_json params_to_json(const EngineParams& p) {
    ordered_json j;
    j["omega"] = p.omega;
    j["omega0"] = p.omega0;
    j["omega_l"] = p.omega_l;
    j["gamma_comp"] = p.gamma_comp;
    j["gamma_exp"] = p.gamma_exp;
    j["gamma_h"] = p.gamma_h;
    j["gamma_c"] = p.gamma_c;
    j["t_h"] = p.t_h;
    j["t_c"] = p.t_c;
    j["tau_comp"] = p.tau_comp;
    j["tau_hot"] = p.tau_hot;
    j["tau_exp"] = p.tau_exp;
    j["tau_cold"] = p.tau_cold;
    j["n_meas"] = p.n_meas;
    j["n_traj"] = p.n_traj;
    j["nu"] = p.nu;
    j["beta_reset"] = p.beta_reset;
    j["lubricant_plus_weight"] = p.lubricant_plus_weight;
    j["master_seed"] = p.master_seed;
    return j;
}

ordered_json propagation_to_json(const PropagationSettings& s) {
    ordered_json j;
    j["substeps_per_unit_time"] = s.substeps_per_unit_time;
    j["lindblad_step"] = s.lindblad_step;
    j["grid_points_for_suprema"] = s.grid_points_for_suprema;
    return j;
}

}  // namespace

void ExperimentConfig::validate() const {
    params.validate();
    propagation.validate();
    if (n_cycles < 1) throw ConfigError("n_cycles must be >= 1");
    if (workers < 1) throw ConfigError("workers must be >= 1");
    if (tau_exp_ratio < 0.0) throw ConfigError("tau_exp_ratio must be >= 0");
    for (const SweepSpec& s : sweeps) {
        if (s.values.empty()) throw ConfigError("sweep over '" + s.param + "' has no values");
    }
}

ExperimentConfig parse_config_text(const std::string& text) {
    ordered_json root;
    try {
        root = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config: JSON parse error: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config: top level must be an object");
    check_keys(root, "",
               {"schema_version", "params", "drive_mode", "measurement_basis", "n_cycles",
                "tau_exp_ratio", "sweep", "propagation", "include_reset_cost", "workers",
                "output_dir"});

    ExperimentConfig cfg;
    if (root.contains("schema_version")) {
        const int v = get_int(root, "", "schema_version", kSchemaVersion);
        if (v != kSchemaVersion) {
            throw ConfigError("config field 'schema_version': unsupported version " +
                              std::to_string(v));
        }
    }
    if (root.contains("params")) {
        if (!root["params"].is_object()) throw ConfigError("config field 'params': expected an object");
        cfg.params = parse_params(root["params"]);
    }
    if (root.contains("drive_mode")) {
        if (!root["drive_mode"].is_string()) throw ConfigError("config field 'drive_mode': expected a string");
        cfg.mode = parse_drive_mode(root["drive_mode"].get<std::string>());
    }
    if (root.contains("measurement_basis")) {
        if (!root["measurement_basis"].is_string()) {
            throw ConfigError("config field 'measurement_basis': expected a string");
        }
        cfg.basis = parse_basis(root["measurement_basis"].get<std::string>());
    }
    cfg.n_cycles = get_int(root, "", "n_cycles", cfg.n_cycles);
    cfg.tau_exp_ratio = get_number(root, "", "tau_exp_ratio", cfg.tau_exp_ratio);
    if (root.contains("sweep")) {
        if (!root["sweep"].is_array()) throw ConfigError("config field 'sweep': expected an array");
        for (size_t i = 0; i < root["sweep"].size(); ++i) {
            cfg.sweeps.push_back(parse_sweep_entry(root["sweep"][i], i));
        }
    }
    if (root.contains("propagation")) {
        if (!root["propagation"].is_object()) {
            throw ConfigError("config field 'propagation': expected an object");
        }
        cfg.propagation = parse_propagation(root["propagation"]);
    }
    if (root.contains("include_reset_cost")) {
        if (!root["include_reset_cost"].is_boolean()) {
            throw ConfigError("config field 'include_reset_cost': expected a boolean");
        }
        cfg.include_reset_cost = root["include_reset_cost"].get<bool>();
    }
    cfg.workers = get_int(root, "", "workers", cfg.workers);
    if (root.contains("output_dir")) {
        if (!root["output_dir"].is_string()) {
            throw ConfigError("config field 'output_dir': expected a string");
        }
        cfg.output_dir = root["output_dir"].get<std::string>();
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config_text(text);
}

nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["params"] = params_to_json(cfg.params);
    j["drive_mode"] = drive_mode_name(cfg.mode);
    j["measurement_basis"] = basis_name(cfg.basis);
    j["n_cycles"] = cfg.n_cycles;
    j["tau_exp_ratio"] = cfg.tau_exp_ratio;
    ordered_json sweeps = ordered_json::array();
    for (const SweepSpec& s : cfg.sweeps) {
        ordered_json e;
        e["param"] = s.param;
        e["values"] = s.values;
        sweeps.push_back(e);
    }
    j["sweep"] = sweeps;
    j["propagation"] = propagation_to_json(cfg.propagation);
    j["include_reset_cost"] = cfg.include_reset_cost;
    j["output_dir"] = cfg.output_dir;
    return j;
}

// ---------------------------------------------------------------------------
// Generic sweep runner
// ---------------------------------------------------------------------------

namespace {

struct LedgerColumn {
    const char* header;
    double CycleLedger::*member;
};

const std::vector<LedgerColumn> kLedgerColumns = {
    {"w_comp", &CycleLedger::w_comp},
    {"w_exp", &CycleLedger::w_exp},
    {"w_tot", &CycleLedger::w_tot},
    {"q_hot", &CycleLedger::q_hot},
    {"q_cold", &CycleLedger::q_cold},
    {"q_tot", &CycleLedger::q_tot},
    {"delta_u", &CycleLedger::delta_u},
    {"power", &CycleLedger::power},
    {"efficiency", &CycleLedger::efficiency},
    {"eta_otto", &CycleLedger::eta_otto},
    {"eta_carnot", &CycleLedger::eta_carnot},
    {"friction_comp", &CycleLedger::friction_comp},
    {"friction_exp", &CycleLedger::friction_exp},
    {"w_joint_sc", &CycleLedger::w_joint_sc},
    {"decoupling_cost", &CycleLedger::decoupling_cost_total},
    {"meas_heat", &CycleLedger::meas_heat},
    {"meas_energy_cost", &CycleLedger::meas_energy_cost},
    {"entropy_production", &CycleLedger::entropy_production},
    {"jump_count", &CycleLedger::jump_count},
    {"drive_cost_per_cycle", &CycleLedger::drive_cost_per_cycle},
    {"net_power", &CycleLedger::net_power},
    {"tau_therm_hot", &CycleLedger::tau_therm_hot},
    {"tau_therm_cold", &CycleLedger::tau_therm_cold},
    {"coherence_comp_end", &CycleLedger::coherence_comp_end},
    {"coherence_exp_end", &CycleLedger::coherence_exp_end},
    {"log_negativity_comp_end", &CycleLedger::log_negativity_comp_end},
    {"first_law_residual", &CycleLedger::first_law_residual},
};

const double kNetPowerNus[3] = {0.0, 0.001, 0.01};

}  // namespace

RunOutput run_config(const ExperimentConfig& cfg) {
    cfg.validate();

    std::vector<size_t> sizes;
    size_t total = 1;
    for (const SweepSpec& s : cfg.sweeps) {
        sizes.push_back(s.values.size());
        total *= s.values.size();
    }
    if (total > 1000000) throw ConfigError("sweep grid exceeds 1e6 points");

    Table table("results");
    for (const SweepSpec& s : cfg.sweeps) table.add_column(s.param);
    table.add_column("trajectory_index", Table::ColumnKind::Integer);
    for (const LedgerColumn& c : kLedgerColumns) table.add_column(c.header);
    table.add_column("net_power_nu0");
    table.add_column("net_power_nu0p001");
    table.add_column("net_power_nu0p01");

    std::vector<std::vector<double>> rows(total);
    parallel_for(total, cfg.workers, [&](size_t flat) {
        EngineParams p = cfg.params;
        std::vector<double> row;
        size_t rem = flat;
        for (size_t s = 0; s < cfg.sweeps.size(); ++s) {
            const size_t idx = rem % sizes[s];
            rem /= sizes[s];
            set_param(p, cfg.sweeps[s].param, cfg.sweeps[s].values[idx]);
            row.push_back(cfg.sweeps[s].values[idx]);
        }
        if (cfg.tau_exp_ratio > 0.0) p.tau_exp = cfg.tau_exp_ratio * p.tau_comp;
        p.validate();
        row.push_back(static_cast<double>(flat));  // stochastic stream index of this row

        CycleOptions options;
        options.mode = cfg.mode;
        options.basis = cfg.basis;
        options.n_cycles = cfg.n_cycles;
        options.include_reset_cost = cfg.include_reset_cost;
        options.trajectory_index = flat;
        const std::vector<CycleResult> cycles = run_cycles(p, options, cfg.propagation);
        const CycleLedger& led = cycles.back().ledger;
        for (const LedgerColumn& c : kLedgerColumns) row.push_back(led.*(c.member));
        for (double nu : kNetPowerNus) {
            row.push_back(cfg.mode == DriveMode::Bare ? led.power : net_power(p, led.power, nu));
        }
        rows[flat] = std::move(row);
    });
    for (auto& row : rows) table.add_row(std::move(row));

    RunOutput out;
    out.manifest["schema_version"] = kSchemaVersion;
    out.manifest["tool_version"] = kToolVersion;
    out.manifest["kind"] = "config";
    out.manifest["master_seed"] = cfg.params.master_seed;
    out.manifest["resolved_config"] = config_to_json(cfg);
    out.manifest["outputs"] = ordered_json::array({"results.csv"});
    out.tables.push_back(std::move(table));
    return out;
}

// ---------------------------------------------------------------------------
// Presets (one per in-scope figure)
// ---------------------------------------------------------------------------

namespace {

struct PresetContext {
    Profile profile;
    std::optional<std::uint64_t> seed;
    int workers;
};

EngineParams with_seed(EngineParams p, const PresetContext& ctx) {
    if (ctx.seed) p.master_seed = *ctx.seed;
    return p;
}

ordered_json manifest_header(const std::string& preset, const PresetContext& ctx,
                             const EngineParams& base, const PropagationSettings& settings) {
    ordered_json m;
    m["schema_version"] = kSchemaVersion;
    m["tool_version"] = kToolVersion;
    m["kind"] = "preset";
    m["preset"] = preset;
    m["profile"] = profile_name(ctx.profile);
    m["master_seed"] = base.master_seed;
    m["params"] = params_to_json(base);
    m["propagation"] = propagation_to_json(settings);
    return m;
}

void finish_manifest(RunOutput& out) {
    ordered_json files = ordered_json::array();
    for (const Table& t : out.tables) files.push_back(t.name() + ".csv");
    out.manifest["outputs"] = files;
}

// Coherence of the reduced state after one lubricated compression stroke.
double compression_coherence(const EngineParams& p, const PropagationSettings& settings) {
    const DensityOperator rho0 = joint_initial(p, gibbs_cold(p));
    const DensityOperator rho1 = propagate_total(p, Stage::Compression, rho0, settings);
    const DensityOperator reduced(partial_trace(rho1.matrix(), Subsystem::First));
    return coherence_l1(reduced, h_hot(p));
}

EngineParams fig3_base(const PresetContext& ctx) {
    EngineParams p;
    p.omega = 1.0;
    p.omega_l = 1.0;
    p.omega0 = 5.0;
    p.t_c = 0.5;
    p.n_meas = 100;
    return with_seed(p, ctx);
}

RunOutput preset_fig3(const PresetContext& ctx) {
    const EngineParams base = fig3_base(ctx);
    const PropagationSettings settings;
    const std::vector<double> taus = ctx.profile == Profile::Full ? lin_grid(0.05, 10.0, 0.05)
                                                                  : lin_grid(0.5, 10.0, 0.5);
    const std::vector<double> sc_gammas = {0.0, 1.0, 5.0, 10.0, 20.0, 50.0};
    const std::vector<double> zeno_gammas = {10.0, 20.0, 40.0};

    Table a("fig3a");
    a.add_column("tau_comp");
    for (double g : sc_gammas) a.add_column("coherence_gamma" + col_suffix(g));
    Table b("fig3b");
    b.add_column("tau_comp");
    for (double g : zeno_gammas) b.add_column("coherence_gamma" + col_suffix(g));
    for (double g : zeno_gammas)
        b.add_column("jumps_gamma" + col_suffix(g), Table::ColumnKind::Integer);

    std::vector<std::vector<double>> rows_a(taus.size()), rows_b(taus.size());
    parallel_for(taus.size(), ctx.workers, [&](size_t i) {
        EngineParams p = base;
        p.tau_comp = taus[i];
        std::vector<double> ra{taus[i]};
        for (double g : sc_gammas) {
            p.gamma_comp = p.gamma_exp = g;
            ra.push_back(compression_coherence(p, settings));
        }
        std::vector<double> rb{taus[i]};
        std::vector<double> jumps;
        for (double g : zeno_gammas) {
            p.gamma_comp = p.gamma_exp = g;
            const TrajectoryStream stream{p.master_seed, static_cast<std::uint64_t>(i)};
            const TrajectoryRecord rec = run_zeno_stroke(
                p, Stage::Compression, joint_initial(p, gibbs_cold(p)), MeasurementBasis::X,
                stream, 0, settings);
            const DensityOperator reduced(partial_trace(rec.final_state->matrix(), Subsystem::First));
            rb.push_back(coherence_l1(reduced, h_hot(p)));
            jumps.push_back(static_cast<double>(rec.jump_count));
        }
        rb.insert(rb.end(), jumps.begin(), jumps.end());
        rows_a[i] = std::move(ra);
        rows_b[i] = std::move(rb);
    });
    for (auto& r : rows_a) a.add_row(std::move(r));
    for (auto& r : rows_b) b.add_row(std::move(r));

    RunOutput out;
    out.manifest = manifest_header("fig3", ctx, base, settings);
    out.manifest["strong_coupling_gammas"] = sc_gammas;
    out.manifest["zeno_gammas"] = zeno_gammas;
    out.tables.push_back(std::move(a));
    out.tables.push_back(std::move(b));
    finish_manifest(out);
    return out;
}

EngineParams fig4_base(const PresetContext& ctx) {
    EngineParams p;
    p.omega = 1.0;
    p.omega_l = 1.0;
    p.omega0 = 3.01105;
    p.t_c = 0.5;
    p.t_h = 3.0;
    p.gamma_h = 0.5;
    p.gamma_c = 0.5;
    p.tau_hot = 5.0;
    p.tau_cold = 12.0;
    return with_seed(p, ctx);
}

RunOutput preset_fig4(const PresetContext& ctx) {
    const EngineParams base = fig4_base(ctx);
    const PropagationSettings settings;
    const std::vector<double> taus = ctx.profile == Profile::Full ? lin_grid(5.0, 50.0, 0.05)
                                                                  : lin_grid(5.0, 50.0, 5.0);
    const std::vector<double> sc_gammas = {1.0, 10.0, 60.0};
    const std::vector<std::pair<double, int>> zeno_series = {{10.0, 100}, {20.0, 200}, {60.0, 400}};

    struct Series {
        std::string name;
        DriveMode mode;
        double gamma;
        int n;
    };
    std::vector<Series> series{{"bare", DriveMode::Bare, 0.0, 0}};
    for (double g : sc_gammas)
        series.push_back({"sc_gamma" + col_suffix(g), DriveMode::StrongCoupling, g, 0});
    for (auto [g, n] : zeno_series)
        series.push_back({"zeno_gamma" + col_suffix(g) + "_n" + std::to_string(n),
                          DriveMode::ZenoMonitored, g, n});

    Table work("fig4_work"), eff("fig4_efficiency"), power("fig4_power");
    for (Table* t : {&work, &eff, &power}) {
        t->add_column("tau_comp");
        for (const Series& s : series) t->add_column(s.name);
        t->add_column("ideal");
    }

    std::vector<std::array<std::vector<double>, 3>> rows(taus.size());
    parallel_for(taus.size(), ctx.workers, [&](size_t i) {
        std::vector<double> rw{taus[i]}, re{taus[i]}, rp{taus[i]};
        for (const Series& s : series) {
            EngineParams p = base;
            p.tau_comp = taus[i];
            p.tau_exp = 0.5 * taus[i];
            p.gamma_comp = p.gamma_exp = s.gamma;
            if (s.n > 0) p.n_meas = s.n;
            CycleOptions options;
            options.mode = s.mode;
            options.record_friction = false;
            options.trajectory_index = i;
            const CycleLedger led = run_cycle(p, options, settings).ledger;
            rw.push_back(led.w_tot);
            re.push_back(led.efficiency);
            rp.push_back(led.power);
        }
        EngineParams p = base;
        p.tau_comp = taus[i];
        p.tau_exp = 0.5 * taus[i];
        const IdealOtto ideal = ideal_otto(p);
        rw.push_back(ideal.w_tot);
        re.push_back(ideal.eta_otto);
        rp.push_back(-ideal.w_tot / p.cycle_time());
        rows[i] = {std::move(rw), std::move(re), std::move(rp)};
    });
    for (auto& r : rows) {
        work.add_row(std::move(r[0]));
        eff.add_row(std::move(r[1]));
        power.add_row(std::move(r[2]));
    }

    RunOutput out;
    out.manifest = manifest_header("fig4", ctx, base, settings);
    out.manifest["strong_coupling_gammas"] = sc_gammas;
    {
        ordered_json zs = ordered_json::array();
        for (auto [g, n] : zeno_series) zs.push_back(ordered_json{{"gamma", g}, {"n_meas", n}});
        out.manifest["zeno_series"] = zs;
    }
    out.tables.push_back(std::move(work));
    out.tables.push_back(std::move(eff));
    out.tables.push_back(std::move(power));
    finish_manifest(out);
    return out;
}

RunOutput preset_fig5(const PresetContext& ctx) {
    const EngineParams base = fig4_base(ctx);
    const PropagationSettings settings;
    const std::vector<double> taus = ctx.profile == Profile::Full ? lin_grid(5.0, 50.0, 0.05)
                                                                  : lin_grid(5.0, 50.0, 5.0);
    const std::vector<double> gammas = {10.0, 30.0, 60.0};

    Table t("fig5");
    t.add_column("tau_comp");
    t.add_column("ideal_w_tot");
    for (double g : gammas) t.add_column("w_joint_gamma" + col_suffix(g));

    std::vector<std::vector<double>> rows(taus.size());
    parallel_for(taus.size(), ctx.workers, [&](size_t i) {
        EngineParams p = base;
        p.tau_comp = taus[i];
        p.tau_exp = 0.5 * taus[i];
        std::vector<double> row{taus[i], ideal_otto(p).w_tot};
        for (double g : gammas) {
            p.gamma_comp = p.gamma_exp = g;
            const DensityOperator c0 = joint_initial(p, gibbs_cold(p));
            const DensityOperator c1 = propagate_total(p, Stage::Compression, c0, settings);
            const DensityOperator e0 = joint_initial(p, gibbs_hot(p));
            const DensityOperator e1 = propagate_total(p, Stage::Expansion, e0, settings);
            row.push_back(joint_work_strong_coupling(p, c0, c1, e0, e1));
        }
        rows[i] = std::move(row);
    });
    for (auto& r : rows) t.add_row(std::move(r));

    RunOutput out;
    out.manifest = manifest_header("fig5", ctx, base, settings);
    out.manifest["gammas"] = gammas;
    out.tables.push_back(std::move(t));
    finish_manifest(out);
    return out;
}

EngineParams fig6_base(const PresetContext& ctx) {
    EngineParams p = fig4_base(ctx);
    p.tau_comp = 9.0;
    p.tau_exp = 4.5;
    p.n_meas = 200;
    p.gamma_comp = p.gamma_exp = 20.0;
    p.n_traj = 50;
    return p;
}

RunOutput preset_fig6(const PresetContext& ctx) {
    const EngineParams p = fig6_base(ctx);
    const PropagationSettings settings;

    const TrajectoryEnsemble comp =
        run_ensemble(p, Stage::Compression, joint_initial(p, gibbs_cold(p)), MeasurementBasis::X,
                     p.n_traj, p.master_seed, settings, ctx.workers, 0);
    const TrajectoryEnsemble expn =
        run_ensemble(p, Stage::Expansion, joint_initial(p, gibbs_hot(p)), MeasurementBasis::X,
                     p.n_traj, p.master_seed, settings, ctx.workers,
                     static_cast<std::uint64_t>(p.n_meas));

    Table inc("fig6_increments");
    inc.add_column("trajectory", Table::ColumnKind::Integer);
    inc.add_column("stroke", Table::ColumnKind::Integer);  // 0 = compression, 1 = expansion
    inc.add_column("step", Table::ColumnKind::Integer);
    inc.add_column("t_local");
    inc.add_column("outcome", Table::ColumnKind::Integer);  // 0 = +, 1 = -
    inc.add_column("step_work");
    inc.add_column("step_meas_heat");

    Table summary("fig6_trajectories");
    summary.add_column("trajectory", Table::ColumnKind::Integer);
    summary.add_column("stroke", Table::ColumnKind::Integer);
    summary.add_column("total_work");
    summary.add_column("total_meas_heat");
    summary.add_column("log_prob");
    summary.add_column("jump_count", Table::ColumnKind::Integer);

    const auto emit = [&](const TrajectoryEnsemble& ens, int stroke, Stage s) {
        const double dt = stroke_duration(p, s) / p.n_meas;
        for (size_t i = 0; i < ens.records.size(); ++i) {
            const TrajectoryRecord& r = ens.records[i];
            for (int k = 0; k < p.n_meas; ++k) {
                inc.add_row({static_cast<double>(i), static_cast<double>(stroke),
                             static_cast<double>(k + 1), (k + 1) * dt,
                             static_cast<double>(static_cast<int>(r.outcomes[static_cast<size_t>(k)])),
                             r.step_work[static_cast<size_t>(k)],
                             r.step_meas_heat[static_cast<size_t>(k)]});
            }
            summary.add_row({static_cast<double>(i), static_cast<double>(stroke), r.total_work(),
                             r.total_meas_heat(), r.log_prob, static_cast<double>(r.jump_count)});
        }
    };
    emit(comp, 0, Stage::Compression);
    emit(expn, 1, Stage::Expansion);

    RunOutput out;
    out.manifest = manifest_header("fig6", ctx, p, settings);
    out.tables.push_back(std::move(inc));
    out.tables.push_back(std::move(summary));
    finish_manifest(out);
    return out;
}

RunOutput preset_fig7(const PresetContext& ctx) {
    EngineParams base = fig4_base(ctx);
    base.gamma_comp = base.gamma_exp = 20.0;
    base.n_traj = 50;
    const PropagationSettings settings;
    const std::vector<int> ns = {50, 100, 200, 400, 800};
    const std::vector<double> taus = ctx.profile == Profile::Full
                                         ? std::vector<double>{5.0, 6.0, 7.0, 8.0, 9.0, 10.0}
                                         : std::vector<double>{5.0, 10.0};

    Table t("fig7");
    t.add_column("n_meas", Table::ColumnKind::Integer);
    t.add_column("tau_comp");
    t.add_column("mean_work");
    t.add_column("std_work");
    t.add_column("mean_meas_heat");
    t.add_column("jump_fraction");
    t.add_column("mean_jump_count");
    t.add_column("sigma_exact_comp");
    t.add_column("sigma_sampled_comp");
    t.add_column("ideal_w_tot");

    for (double tau : taus) {
        for (int n : ns) {
            EngineParams p = base;
            p.tau_comp = tau;
            p.tau_exp = 0.5 * tau;
            p.n_meas = n;
            const DensityOperator comp_in = joint_initial(p, gibbs_cold(p));
            const DensityOperator exp_in = joint_initial(p, gibbs_hot(p));
            const TrajectoryEnsemble comp = run_ensemble(p, Stage::Compression, comp_in,
                                                         MeasurementBasis::X, p.n_traj,
                                                         p.master_seed, settings, ctx.workers, 0);
            const TrajectoryEnsemble expn = run_ensemble(
                p, Stage::Expansion, exp_in, MeasurementBasis::X, p.n_traj, p.master_seed,
                settings, ctx.workers, static_cast<std::uint64_t>(n));

            double mean_w = 0.0, mean_q = 0.0, mean_jumps = 0.0;
            int jumpy = 0;
            std::vector<double> w_tot(static_cast<size_t>(p.n_traj));
            for (int i = 0; i < p.n_traj; ++i) {
                const auto& rc = comp.records[static_cast<size_t>(i)];
                const auto& re = expn.records[static_cast<size_t>(i)];
                w_tot[static_cast<size_t>(i)] = rc.total_work() + re.total_work();
                mean_w += w_tot[static_cast<size_t>(i)];
                mean_q += rc.total_meas_heat() + re.total_meas_heat();
                const int jumps = rc.jump_count + re.jump_count;
                mean_jumps += jumps;
                if (jumps > 0) ++jumpy;
            }
            mean_w /= p.n_traj;
            mean_q /= p.n_traj;
            mean_jumps /= p.n_traj;
            double ss = 0.0;
            for (double w : w_tot) ss += (w - mean_w) * (w - mean_w);
            const double std_w = p.n_traj > 1 ? std::sqrt(ss / (p.n_traj - 1)) : 0.0;

            const double sigma_exact =
                zeno_entropy_production_exact(p, Stage::Compression, comp_in, MeasurementBasis::X,
                                              settings);
            double sigma_sampled = kNaN;
            try {
                sigma_sampled = zeno_entropy_production_sampled(comp, MeasOutcome::Plus);
            } catch (const std::invalid_argument&) {
                // All sampled trajectories ended off-sector; leave the cell empty.
            }
            t.add_row({static_cast<double>(n), tau, mean_w, std_w, mean_q,
                       static_cast<double>(jumpy) / p.n_traj, mean_jumps, sigma_exact,
                       sigma_sampled, ideal_otto(p).w_tot});
        }
    }

    RunOutput out;
    out.manifest = manifest_header("fig7", ctx, base, settings);
    out.manifest["n_values"] = ns;
    out.manifest["tau_comp_values"] = taus;
    out.tables.push_back(std::move(t));
    finish_manifest(out);
    return out;
}

// Shared sweep for the log-negativity and decoupling-cost figures.
RunOutput lubricant_cost_sweep(const PresetContext& ctx, const std::string& id, bool negativity) {
    EngineParams base = fig3_base(ctx);
    const PropagationSettings settings;
    const std::vector<double> gammas = ctx.profile == Profile::Full ? lin_grid(1.0, 50.0, 0.01)
                                                                    : lin_grid(1.0, 50.0, 0.5);
    const std::vector<double> taus = {1.0, 2.0, 5.0, 10.0};

    Table t(id);
    t.add_column("gamma");
    for (double tau : taus) {
        t.add_column((negativity ? "log_negativity_tau" : "decoupling_cost_tau") + col_suffix(tau));
    }

    std::vector<std::vector<double>> rows(gammas.size());
    parallel_for(gammas.size(), ctx.workers, [&](size_t i) {
        std::vector<double> row{gammas[i]};
        for (double tau : taus) {
            EngineParams p = base;
            p.tau_comp = tau;
            p.gamma_comp = p.gamma_exp = gammas[i];
            const DensityOperator rho_s0 = gibbs_cold(p);
            const DensityOperator rho0 = joint_initial(p, rho_s0);
            const DensityOperator rho1 = propagate_total(p, Stage::Compression, rho0, settings);
            row.push_back(negativity
                              ? log_negativity(rho1)
                              : decoupling_cost(p, Stage::Compression, rho1, rho_s0.matrix(),
                                                lubricant_initial_state(p)));
        }
        rows[i] = std::move(row);
    });
    for (auto& r : rows) t.add_row(std::move(r));

    RunOutput out;
    out.manifest = manifest_header(id, ctx, base, settings);
    out.manifest["tau_comp_values"] = taus;
    out.tables.push_back(std::move(t));
    finish_manifest(out);
    return out;
}

RunOutput preset_fig8(const PresetContext& ctx) { return lubricant_cost_sweep(ctx, "fig8", true); }
RunOutput preset_fig9(const PresetContext& ctx) { return lubricant_cost_sweep(ctx, "fig9", false); }

RunOutput preset_fig10(const PresetContext& ctx) {
    EngineParams base = fig4_base(ctx);
    base.gamma_h = base.gamma_c = 0.005;
    base.tau_comp = 5.0;
    base.tau_exp = 2.5;
    base.gamma_comp = base.gamma_exp = 60.0;
    base.n_meas = 400;
    PropagationSettings settings;
    settings.lindblad_step = ctx.profile == Profile::Full ? 5e-3 : 1e-2;
    const std::vector<double> tau_hots = ctx.profile == Profile::Full
                                             ? lin_grid(300.0, 800.0, 25.0)
                                             : std::vector<double>{300.0, 500.0, 650.0, 800.0};
    const int n_cycles = 6;

    Table t("fig10");
    t.add_column("tau_hot");
    t.add_column("tau_cycle");
    t.add_column("w_tot_bare");
    t.add_column("w_tot_zeno");
    t.add_column("power_bare");
    t.add_column("power_zeno");
    t.add_column("efficiency_bare");
    t.add_column("efficiency_zeno");
    t.add_column("net_power_zeno_nu0p001");
    t.add_column("net_power_zeno_nu0p01");

    std::vector<std::vector<double>> rows(tau_hots.size());
    parallel_for(tau_hots.size(), ctx.workers, [&](size_t i) {
        EngineParams p = base;
        p.tau_hot = tau_hots[i];
        p.tau_cold = 2.0 * tau_hots[i];

        CycleOptions bare;
        bare.mode = DriveMode::Bare;
        bare.n_cycles = n_cycles;
        bare.record_friction = false;
        const CycleLedger lb = run_cycles(p, bare, settings).back().ledger;

        CycleOptions zeno;
        zeno.mode = DriveMode::ZenoMonitored;
        zeno.n_cycles = n_cycles;
        zeno.record_friction = false;
        zeno.trajectory_index = i;
        const CycleLedger lz = run_cycles(p, zeno, settings).back().ledger;

        rows[i] = {tau_hots[i],       p.cycle_time(),  lb.w_tot,
                   lz.w_tot,          lb.power,        lz.power,
                   lb.efficiency,     lz.efficiency,   net_power(p, lz.power, 0.001),
                   net_power(p, lz.power, 0.01)};
    });
    for (auto& r : rows) t.add_row(std::move(r));

    RunOutput out;
    out.manifest = manifest_header("fig10", ctx, base, settings);
    out.manifest["n_cycles"] = n_cycles;
    out.tables.push_back(std::move(t));
    finish_manifest(out);
    return out;
}

RunOutput preset_fig11(const PresetContext& ctx) {
    EngineParams base = fig3_base(ctx);
    base.gamma_comp = base.gamma_exp = 50.0;
    base.n_meas = 100;
    const PropagationSettings settings;
    const std::vector<double> taus = ctx.profile == Profile::Full ? lin_grid(0.05, 10.0, 0.05)
                                                                  : lin_grid(0.5, 10.0, 0.5);

    Table t("fig11");
    t.add_column("tau_comp");
    t.add_column("coherence_x_basis");
    t.add_column("coherence_computational_basis");
    t.add_column("jumps_x_basis", Table::ColumnKind::Integer);
    t.add_column("jumps_computational_basis", Table::ColumnKind::Integer);

    std::vector<std::vector<double>> rows(taus.size());
    parallel_for(taus.size(), ctx.workers, [&](size_t i) {
        EngineParams p = base;
        p.tau_comp = taus[i];
        std::vector<double> row{taus[i]};
        std::vector<double> jumps;
        for (MeasurementBasis basis : {MeasurementBasis::X, MeasurementBasis::Computational}) {
            const TrajectoryStream stream{p.master_seed, static_cast<std::uint64_t>(i)};
            const TrajectoryRecord rec = run_zeno_stroke(
                p, Stage::Compression, joint_initial(p, gibbs_cold(p)), basis, stream, 0, settings);
            const DensityOperator reduced(partial_trace(rec.final_state->matrix(), Subsystem::First));
            row.push_back(coherence_l1(reduced, h_hot(p)));
            jumps.push_back(static_cast<double>(rec.jump_count));
        }
        row.insert(row.end(), jumps.begin(), jumps.end());
        rows[i] = std::move(row);
    });
    for (auto& r : rows) t.add_row(std::move(r));

    RunOutput out;
    out.manifest = manifest_header("fig11", ctx, base, settings);
    out.tables.push_back(std::move(t));
    finish_manifest(out);
    return out;
}

using PresetFn = RunOutput (*)(const PresetContext&);

const std::vector<std::pair<const char*, PresetFn>> kPresets = {
    {"fig3", preset_fig3},  {"fig4", preset_fig4}, {"fig5", preset_fig5},
    {"fig6", preset_fig6},  {"fig7", preset_fig7}, {"fig8", preset_fig8},
    {"fig9", preset_fig9},  {"fig10", preset_fig10}, {"fig11", preset_fig11},
};

}  // namespace

std::vector<std::string> preset_ids() {
    std::vector<std::string> ids;
    for (const auto& [id, fn] : kPresets) ids.push_back(id);
    return ids;
}

bool is_preset(const std::string& id) {
    for (const auto& [pid, fn] : kPresets)
        if (id == pid) return true;
    return false;
}

RunOutput run_preset(const std::string& id, Profile profile,
                     std::optional<std::uint64_t> seed_override, int workers) {
    for (const auto& [pid, fn] : kPresets) {
        if (id == pid) return fn(PresetContext{profile, seed_override, workers});
    }
    throw ConfigError("unknown preset '" + id + "'");
}

void write_output(const RunOutput& output, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    for (const Table& t : output.tables) {
        const std::filesystem::path path = std::filesystem::path(out_dir) / (t.name() + ".csv");
        std::ofstream os(path, std::ios::binary);
        if (!os) throw ConfigError("cannot write '" + path.string() + "'");
        t.write_csv(os);
    }
    const std::filesystem::path mpath = std::filesystem::path(out_dir) / "manifest.json";
    std::ofstream os(mpath, std::ios::binary);
    if (!os) throw ConfigError("cannot write '" + mpath.string() + "'");
    os << output.manifest.dump(2) << '\n';
}

}  // namespace zeno_otto
