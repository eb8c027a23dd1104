#pragma once

#include "zeno_otto/density.hpp"
#include "zeno_otto/model.hpp"
#include "zeno_otto/monte_carlo.hpp"
#include "zeno_otto/params.hpp"
#include "zeno_otto/propagation.hpp"

#include <vector>

namespace zeno_otto {

// Closed-form quasistatic Otto quantities (perfect thermalization,
// transitionless strokes). Extraction has negative sign.
struct IdealOtto {
    double w_comp;
    double w_exp;
    double w_tot;
    double q_hot;
    double q_cold;
    double eta_otto;
    double eta_carnot;
    double eta_ca;  // Curzon-Ahlborn, reference constant only
    bool extraction_ok;
};
IdealOtto ideal_otto(const EngineParams& p);

// <h_f>_{rho_f} - <h_i>_{rho_i}; extraction => negative.
double stroke_work(const Mat& h_i, const Mat& h_f, const DensityOperator& rho_i,
                   const DensityOperator& rho_f);

// Integral work split of a work stroke from a uniformly sampled reduced-state
// path: population term (gap change) and coherent term (friction).
struct FrictionSplit {
    double coherent_part;
    double population_part;
    double total() const { return coherent_part + population_part; }
};
FrictionSplit friction_work(const EngineParams& p, Stage s, const std::vector<double>& times,
                            const std::vector<Mat>& rho_path);

// Analytic d epsilon / dt along a work stroke.
double stroke_gap_rate(const EngineParams& p, Stage s, double local_t);

// Joint-system work over both work strokes, H_tot expectations at endpoints.
double joint_work_strong_coupling(const EngineParams& p, const DensityOperator& rho_sl_t0,
                                  const DensityOperator& rho_sl_t1, const DensityOperator& rho_sl_t2,
                                  const DensityOperator& rho_sl_t3);

// Interaction energy retained at switch-off:
// Tr[H_SL(t_f) rho_SL(t_f)] - Tr[H_SL(t_i) rho_S(t_i) (x) rho_L(t_i)].
double decoupling_cost(const EngineParams& p, Stage s, const DensityOperator& rho_sl_final,
                       const Mat& rho_s_initial, const Mat& rho_l_initial);

// Nonselective measurement cost split per Eq. for Delta E_proj: the heat part
// Tr[h (rho' - rho)] and the Landauer reset part H({p_l}) / beta_reset (nats).
struct MeasurementCost {
    double heat_part;
    double reset_part;
    double total() const { return heat_part + reset_part; }
};
MeasurementCost measurement_energy_cost(const DensityOperator& rho_before, const Mat& h,
                                        MeasurementBasis basis, double beta_reset);

// The commonly quoted cost 4 nu Gamma tau equals the trace norm of the
// interaction Gamma R (x) X (its Frobenius norm gives 2 nu Gamma tau); both
// conventions are provided and trace norm is the default.
enum class DriveNorm { Trace, Frobenius };

// C_drive(tau_stroke) = nu * integral of ||H_SL(t)|| dt (closed form).
double drive_cost(const EngineParams& p, Stage s, DriveNorm norm = DriveNorm::Trace);
// Same by quadrature of the norm along the stroke.
double drive_cost_quadrature(const EngineParams& p, Stage s, DriveNorm norm, int grid_points);
// P_net = P_tot - [C_drive(comp) + C_drive(exp)] / tau, at the given nu.
double net_power(const EngineParams& p, double power_tot, double nu,
                 DriveNorm norm = DriveNorm::Trace);

struct ThermalizationEstimate {
    double n_bar;
    double lambda_gap;     // gamma/2 (2 n_bar + 1)
    double tau_estimate;   // 1 / lambda_gap
};
ThermalizationEstimate thermalization_time(const EngineParams& p, Bath b);

// 2 |<e0| rho |e1>| in the eigenbasis of h_ref; throws on degenerate h_ref.
double coherence_l1(const DensityOperator& rho_s, const Mat& h_ref);

// log2 || rho^{T_L} ||_1, clamped at 0; the lubricant is the second factor.
double log_negativity(const DensityOperator& rho_sl);

}  // namespace zeno_otto
