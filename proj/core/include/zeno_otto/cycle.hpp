#pragma once

#include "zeno_otto/ledger.hpp"
#include "zeno_otto/model.hpp"
#include "zeno_otto/monte_carlo.hpp"
#include "zeno_otto/params.hpp"
#include "zeno_otto/propagation.hpp"

#include <optional>
#include <vector>

namespace zeno_otto {

struct CycleOptions {
    DriveMode mode = DriveMode::Bare;
    MeasurementBasis basis = MeasurementBasis::X;
    int n_cycles = 1;
    std::uint64_t trajectory_index = 0;  // Zeno runs: stream index under master_seed
    bool record_friction = true;         // sample the reduced path for the friction split
    bool include_reset_cost = false;     // fold the Landauer term into meas_energy_cost
    DriveNorm drive_norm = DriveNorm::Trace;
};

// Per-cycle and per-stroke bookkeeping. Work/heat sign convention: extraction
// is negative; the sign flips of power and efficiency are applied here only.
// Fields that do not apply to the drive mode are NaN.
struct CycleLedger {
    double w_comp, w_exp, w_tot;         // reduced-system endpoint work
    double q_hot, q_cold, q_tot;
    double delta_u;                      // <H_cold> change over the cycle
    double power;                        // -W_tot / tau
    double efficiency;                   // -W_tot / Q_hot
    double eta_otto, eta_carnot;
    double friction_comp, friction_exp;  // coherent (friction) work parts
    double friction_pop_comp, friction_pop_exp;
    double w_joint_sc;                   // joint-system work, lubricated modes
    double decoupling_cost_comp, decoupling_cost_exp, decoupling_cost_total;
    double meas_heat;                    // trajectory sum of dQ^(meas), Zeno mode
    double meas_energy_cost;             // nonselective Delta E_proj total
    double entropy_production;           // exact-marginal sigma, both work strokes
    double jump_count;
    double drive_cost_per_cycle;         // at params.nu
    double net_power;                    // at params.nu
    double tau_therm_hot, tau_therm_cold;
    double coherence_comp_end;           // C_l1(rho_S(t1) | H_hot)
    double coherence_exp_end;            // C_l1(rho_S(t3) | H_cold)
    double log_negativity_comp_end;
    double first_law_residual;           // |W_tot + Q_tot - delta_u|
};

struct CycleResult {
    CycleLedger ledger;
    DensityOperator rho_start;
    DensityOperator rho_end;
};

// One full Otto cycle from rho_start (Gibbs cold when unset). cycle_index
// offsets the Zeno measurement stream so consecutive cycles draw fresh numbers.
CycleResult run_cycle(const EngineParams& p, const CycleOptions& options,
                      const PropagationSettings& settings,
                      const std::optional<DensityOperator>& rho_start = std::nullopt,
                      int cycle_index = 0);

// options.n_cycles consecutive cycles with the state carried over.
std::vector<CycleResult> run_cycles(const EngineParams& p, const CycleOptions& options,
                                    const PropagationSettings& settings);

}  // namespace zeno_otto
