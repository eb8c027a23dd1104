#pragma once

#include "zeno_otto/cycle.hpp"
#include "zeno_otto/table.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace zeno_otto {

// Desk: coarse grids that finish on a laptop core; Full: caption-exact grids.
enum class Profile { Desk, Full };

struct SweepSpec {
    std::string param;
    std::vector<double> values;
};

struct ExperimentConfig {
    EngineParams params;
    DriveMode mode = DriveMode::Bare;
    MeasurementBasis basis = MeasurementBasis::X;
    int n_cycles = 1;
    // When > 0, tau_exp is tied to tau_exp_ratio * tau_comp at every sweep point.
    double tau_exp_ratio = 0.0;
    std::vector<SweepSpec> sweeps;
    PropagationSettings propagation;
    bool include_reset_cost = false;
    int workers = 1;
    std::string output_dir = "out";

    void validate() const;
};

struct RunOutput {
    std::vector<Table> tables;
    nlohmann::ordered_json manifest;
};

// Strict parsing: unknown keys are rejected and errors name the field path.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);
nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);

// Sweep-point cycle table: sweep columns followed by the full ledger columns.
RunOutput run_config(const ExperimentConfig& cfg);

std::vector<std::string> preset_ids();
bool is_preset(const std::string& id);
RunOutput run_preset(const std::string& id, Profile profile,
                     std::optional<std::uint64_t> seed_override, int workers);

// One CSV per table plus manifest.json under out_dir (created if missing).
void write_output(const RunOutput& output, const std::string& out_dir);

const char* profile_name(Profile p);
const char* drive_mode_name(DriveMode m);
const char* basis_name(MeasurementBasis b);
DriveMode parse_drive_mode(const std::string& s);
MeasurementBasis parse_basis(const std::string& s);

constexpr int kSchemaVersion = 1;
constexpr const char* kToolVersion = "0.1.0";

}  // namespace zeno_otto
