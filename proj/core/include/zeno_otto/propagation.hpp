#pragma once

#include "zeno_otto/density.hpp"
#include "zeno_otto/model.hpp"
#include "zeno_otto/params.hpp"

#include <functional>

namespace zeno_otto {

struct PropagationSettings {
    int substeps_per_unit_time = 200;
    double lindblad_step = 1e-3;
    int grid_points_for_suprema = 2000;

    // Midpoint substeps must resolve the fast phase set by the coupling;
    // keeps at least ~24 substeps per Gamma^-1.
    PropagationSettings refined_for_coupling(double gamma) const;
    void validate() const;
};

// Time-ordered exponential via midpoint-rule substeps: the product of
// exp(-i H(t_k + dt/2) dt) factors, exactly unitary by construction.
// Checks ||U^dag U - 1||_F <= 1e-9 on the assembled product.
Mat propagate_unitary(const std::function<Mat(double)>& h, double t_i, double t_f,
                      const PropagationSettings& settings);

enum class Bath { Hot, Cold };

double bath_gap(const EngineParams& p, Bath b);       // Omega (hot) or omega (cold)
double bath_occupation(const EngineParams& p, Bath b);  // Bose factor at the stroke gap
Mat bath_hamiltonian(const EngineParams& p, Bath b);

// d rho / dt under the isochoric master equation (commutator plus dissipator,
// jump operators in the eigenbasis of the stroke Hamiltonian).
Mat lindblad_rhs(const EngineParams& p, Bath b, const Mat& rho);

using LindbladObserver = std::function<void(double t, const Mat& rho)>;

// Classical RK4 with fixed step settings.lindblad_step. The observer, when
// set, is called at t = 0 and after every step.
DensityOperator propagate_lindblad(const EngineParams& p, Bath b, const DensityOperator& rho,
                                   double duration, const PropagationSettings& settings,
                                   const LindbladObserver& observer = {});

enum class WorkGenerator { Total, Effective };

// Stroke propagator over [t0_local, t1_local] under h_total or h_effective.
Mat work_stroke_unitary(const EngineParams& p, Stage s, WorkGenerator gen, double t0_local,
                        double t1_local, const PropagationSettings& settings);

DensityOperator propagate_total(const EngineParams& p, Stage s, const DensityOperator& rho_sl,
                                const PropagationSettings& settings);
DensityOperator propagate_effective(const EngineParams& p, Stage s, const DensityOperator& rho_sl,
                                    const PropagationSettings& settings);

// Evaluation of the strong-coupling convergence bound on the qubit engine.
struct BoundReport {
    double gamma;
    double actual_error;  // || U_total - U_effective ||_op at the stroke end
    double bound_value;
    double eta;        // minimal spectral gap of H0 = R(t) (x) X
    double eta_prime;  // maximal spectral slope
    int projector_count;
    double sup_transporter;       // ||A||_{inf,tau}
    double sup_transporter_rate;  // ||dA/dt||_{inf,tau}
    double sup_rest;              // ||G||_{inf,tau}
    double sup_rest_rate;         // ||dG/dt||_{inf,tau}
    double stroke_duration;
    bool holds() const { return actual_error <= bound_value; }
};

BoundReport theorem1_bound(const EngineParams& p, Stage s, double gamma,
                           const PropagationSettings& settings);

}  // namespace zeno_otto
