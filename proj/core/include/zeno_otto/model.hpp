#pragma once

#include "zeno_otto/density.hpp"
#include "zeno_otto/matrix.hpp"
#include "zeno_otto/params.hpp"

#include <array>
#include <utility>

namespace zeno_otto {

enum class Stage { Compression, HotIsochore, Expansion, ColdIsochore };
enum class DriveMode { Bare, StrongCoupling, CounterDiabatic, ZenoMonitored };

bool is_work_stroke(Stage s);
const char* stage_name(Stage s);

// Stroke-local clock. The only place where cycle time is reduced modulo tau.
struct StrokeClock {
    Stage stage;
    double local_t;
};
StrokeClock stage_at(const EngineParams& p, double cycle_t);

double stroke_duration(const EngineParams& p, Stage s);
// Gamma_comp or Gamma_exp; throws for isochores.
double coupling_strength(const EngineParams& p, Stage s);

// Piecewise cyclic system Hamiltonian H_S(t), cycle time in [0, tau).
Mat h_system(const EngineParams& p, double cycle_t);
// Same, parameterized by stroke-local time (isochores return the constant Hamiltonian).
Mat h_stroke(const EngineParams& p, Stage s, double local_t);

Mat h_cold(const EngineParams& p);  // (omega/2) Z
Mat h_hot(const EngineParams& p);   // (omega/2) Z + (omega0/2) X
Mat h_lubricant(const EngineParams& p);

// Mixing angle of the instantaneous eigenbasis (theta_t on compression,
// vartheta_t on expansion) and its analytic time derivatives.
double drive_angle(const EngineParams& p, Stage s, double local_t);
double drive_angle_rate(const EngineParams& p, Stage s, double local_t);
double drive_angle_accel(const EngineParams& p, Stage s, double local_t);
// Instantaneous gap epsilon(t) >= omega.
double stroke_gap(const EngineParams& p, Stage s, double local_t);

struct InstantaneousBasis {
    double angle;
    double gap;
    std::array<cx, 2> ket0;  // upper instantaneous level (+gap/2)
    std::array<cx, 2> ket1;  // lower instantaneous level (-gap/2)
};
InstantaneousBasis instantaneous_basis(const EngineParams& p, Stage s, double local_t);

// Diagonalized drive direction: R(t) on compression, K(t) on expansion.
Mat r_operator(const EngineParams& p, Stage s, double local_t);

// Adiabatic transporter A_stage(t) = i (angle_rate/2)(|0_t><1_t| - |1_t><0_t|),
// which reduces to (angle_rate/2) Y in the computational basis.
Mat counter_diabatic(const EngineParams& p, Stage s, double local_t);

// H_S(t) (x) 1 + 1 (x) H_L + Gamma R(t) (x) X on the joint system.
Mat h_total(const EngineParams& p, Stage s, double local_t);
// Interaction term alone: Gamma R(t) (x) X.
Mat h_interaction(const EngineParams& p, Stage s, double local_t);
// Strong-coupling effective generator: Gamma R(t) (x) X + (A + H_stage) (x) 1.
Mat h_effective(const EngineParams& p, Stage s, double local_t);

enum class LubricantSector { Plus, Minus };
// Zeno Hamiltonian confined to one X sector of the lubricant.
Mat zeno_hamiltonian(const EngineParams& p, Stage s, double local_t, LubricantSector sector);
// Spectral projectors of R(t) (x) X: (P_plus, P_minus).
std::pair<Mat, Mat> zeno_projectors(const EngineParams& p, Stage s, double local_t);

// Gibbs state of h at temperature T > 0.
DensityOperator thermal_state(const Mat& h, double temperature);

// Prepared lubricant state: w |+><+| + (1-w) |-><-|.
Mat lubricant_initial_state(const EngineParams& p);

Mat ket_plus_projector();
Mat ket_minus_projector();

}  // namespace zeno_otto
