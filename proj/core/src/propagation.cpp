#include "zeno_otto/propagation.hpp"

#include <cmath>

namespace zeno_otto {

PropagationSettings PropagationSettings::refined_for_coupling(double gamma) const {
    PropagationSettings s = *this;
    const double needed = 24.0 * std::abs(gamma);
    if (needed > s.substeps_per_unit_time) s.substeps_per_unit_time = static_cast<int>(std::ceil(needed));
    return s;
}

void PropagationSettings::validate() const {
    if (substeps_per_unit_time <= 0) throw ConfigError("substeps_per_unit_time must be > 0");
    if (!(lindblad_step > 0.0)) throw ConfigError("lindblad_step must be > 0");
    if (grid_points_for_suprema <= 0) throw ConfigError("grid_points_for_suprema must be > 0");
}

Mat propagate_unitary(const std::function<Mat(double)>& h, double t_i, double t_f,
                      const PropagationSettings& settings) {
    if (t_f < t_i) throw std::invalid_argument("propagate_unitary: t_f < t_i");
    const Mat probe = h(t_i);
    const int dim = probe.dim();
    if (t_f == t_i) return Mat::identity(dim);

    const double span = t_f - t_i;
    // Guarded ceil so a representation error like 20.000000000000004 does not
    // cost an extra substep and misalign pulse grids.
    const long n = std::max<long>(
        1, std::lround(std::ceil(span * settings.substeps_per_unit_time - 1e-9)));
    const double dt = span / static_cast<double>(n);

    Mat u = Mat::identity(dim);
    for (long k = 0; k < n; ++k) {
        const double t_mid = t_i + (static_cast<double>(k) + 0.5) * dt;
        const Mat hk = h(t_mid);
        if (!hk.is_hermitian(1e-10)) {
            throw std::invalid_argument("propagate_unitary: non-Hermitian Hamiltonian sample");
        }
        u = hermitian_exponential(hk, dt) * u;
    }

    const double unitarity = (u.dagger() * u - Mat::identity(dim)).frobenius();
    if (unitarity > 1e-9) {
        throw InvariantViolation("propagator unitarity defect " + std::to_string(unitarity));
    }
    return u;
}

double bath_gap(const EngineParams& p, Bath b) {
    return b == Bath::Hot ? p.big_omega() : p.omega;
}

double bath_occupation(const EngineParams& p, Bath b) {
    const double beta = 1.0 / (b == Bath::Hot ? p.t_h : p.t_c);
    return 1.0 / std::expm1(beta * bath_gap(p, b));
}

Mat bath_hamiltonian(const EngineParams& p, Bath b) { return b == Bath::Hot ? h_hot(p) : h_cold(p); }

namespace {

struct LindbladContext {
    Mat h;
    Mat sp, sm;      // raising/lowering in the stroke eigenbasis
    Mat sp_sm, sm_sp;
    double rate_up, rate_down;
};

LindbladContext make_context(const EngineParams& p, Bath b) {
    LindbladContext ctx;
    ctx.h = bath_hamiltonian(p, b);
    // |0_b> is the upper instantaneous level; sigma^+ = |0_b><1_b|.
    const double theta = b == Bath::Hot ? std::atan2(p.omega0, p.omega) : 0.0;
    const cx k0[2] = {cx{std::cos(0.5 * theta), 0.0}, cx{std::sin(0.5 * theta), 0.0}};
    const cx k1[2] = {cx{std::sin(0.5 * theta), 0.0}, cx{-std::cos(0.5 * theta), 0.0}};
    ctx.sp = outer(k0, k1);
    ctx.sm = outer(k1, k0);
    ctx.sp_sm = ctx.sp * ctx.sm;
    ctx.sm_sp = ctx.sm * ctx.sp;
    const double gamma = b == Bath::Hot ? p.gamma_h : p.gamma_c;
    const double nbar = bath_occupation(p, b);
    ctx.rate_up = gamma * nbar;
    ctx.rate_down = gamma * (nbar + 1.0);
    return ctx;
}

Mat rhs(const LindbladContext& ctx, const Mat& rho) {
    Mat out = cx{0.0, -1.0} * commutator(ctx.h, rho);
    out += ctx.rate_up * (ctx.sp * rho * ctx.sm - 0.5 * anticommutator(ctx.sm_sp, rho));
    out += ctx.rate_down * (ctx.sm * rho * ctx.sp - 0.5 * anticommutator(ctx.sp_sm, rho));
    return out;
}

}  // namespace

Mat lindblad_rhs(const EngineParams& p, Bath b, const Mat& rho) {
    return rhs(make_context(p, b), rho);
}

DensityOperator propagate_lindblad(const EngineParams& p, Bath b, const DensityOperator& rho,
                                   double duration, const PropagationSettings& settings,
                                   const LindbladObserver& observer) {
    if (duration < 0.0) throw std::invalid_argument("propagate_lindblad: negative duration");
    const LindbladContext ctx = make_context(p, b);
    Mat state = rho.matrix();
    if (observer) observer(0.0, state);
    if (duration == 0.0) return rho;

    const long n = std::max<long>(1, std::lround(std::ceil(duration / settings.lindblad_step - 1e-9)));
    const double dt = duration / static_cast<double>(n);
    for (long k = 0; k < n; ++k) {
        const Mat k1 = rhs(ctx, state);
        const Mat k2 = rhs(ctx, state + (0.5 * dt) * k1);
        const Mat k3 = rhs(ctx, state + (0.5 * dt) * k2);
        const Mat k4 = rhs(ctx, state + dt * k3);
        state += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (observer) observer(static_cast<double>(k + 1) * dt, state);
    }
    return DensityOperator(state);
}

Mat work_stroke_unitary(const EngineParams& p, Stage s, WorkGenerator gen, double t0_local,
                        double t1_local, const PropagationSettings& settings) {
    if (!is_work_stroke(s)) throw std::invalid_argument("work_stroke_unitary: isochoric stage");
    const PropagationSettings refined = settings.refined_for_coupling(coupling_strength(p, s));
    const auto h = [&](double t) {
        return gen == WorkGenerator::Total ? h_total(p, s, t) : h_effective(p, s, t);
    };
    return propagate_unitary(h, t0_local, t1_local, refined);
}

DensityOperator propagate_total(const EngineParams& p, Stage s, const DensityOperator& rho_sl,
                                const PropagationSettings& settings) {
    const Mat u = work_stroke_unitary(p, s, WorkGenerator::Total, 0.0, stroke_duration(p, s), settings);
    return conjugate(u, rho_sl);
}

DensityOperator propagate_effective(const EngineParams& p, Stage s, const DensityOperator& rho_sl,
                                    const PropagationSettings& settings) {
    const Mat u = work_stroke_unitary(p, s, WorkGenerator::Effective, 0.0, stroke_duration(p, s),
                                      settings);
    return conjugate(u, rho_sl);
}

namespace {

struct Suprema {
    double transporter = 0.0;
    double transporter_rate = 0.0;
    double rest = 0.0;
    double rest_rate = 0.0;
};

// ||.||_{inf,tau} suprema on a dense grid. A and dA/dt come from the analytic
// angle derivatives; G(t) = H_stage(t) (x) 1 + 1 (x) H_L is Gamma-independent.
Suprema grid_suprema(const EngineParams& p, Stage s, int grid_points) {
    Suprema sup;
    const double tau = stroke_duration(p, s);
    const Mat id2 = Mat::identity(2);
    for (int k = 0; k <= grid_points; ++k) {
        const double t = tau * static_cast<double>(k) / grid_points;
        sup.transporter = std::max(sup.transporter,
                                   norms(counter_diabatic(p, s, t)).operator_norm);
        sup.transporter_rate = std::max(sup.transporter_rate,
                                        0.5 * std::abs(drive_angle_accel(p, s, t)));
        const Mat g = tensor_product(h_stroke(p, s, t), id2) + tensor_product(id2, h_lubricant(p));
        sup.rest = std::max(sup.rest, norms(g).operator_norm);
    }
    // dG/dt = dH_stage/dt (x) 1 = (+/- omega0 / (2 tau)) X (x) 1, constant in t.
    sup.rest_rate = 0.5 * p.omega0 / tau;
    return sup;
}

}  // namespace

BoundReport theorem1_bound(const EngineParams& p, Stage s, double gamma,
                           const PropagationSettings& settings) {
    if (!is_work_stroke(s)) throw std::invalid_argument("theorem1_bound: isochoric stage");
    if (!(gamma > 0.0)) throw std::invalid_argument("theorem1_bound: gamma must be > 0");

    EngineParams pg = p;
    pg.gamma_comp = pg.gamma_exp = gamma;

    const Suprema sup = grid_suprema(pg, s, settings.grid_points_for_suprema);
    const Suprema sup2 = grid_suprema(pg, s, 2 * settings.grid_points_for_suprema);
    const auto drift = [](double a, double b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); };
    if (drift(sup.transporter, sup2.transporter) > 0.01 || drift(sup.rest, sup2.rest) > 0.01 ||
        drift(sup.transporter_rate, sup2.transporter_rate) > 0.01) {
        throw InvariantViolation("theorem1_bound: supremum grid too coarse (changes >1% on doubling)");
    }

    BoundReport r;
    r.gamma = gamma;
    r.stroke_duration = stroke_duration(pg, s);
    // H0 = R(t) (x) X has constant eigenvalues +/-1, two spectral projectors.
    r.projector_count = 2;
    r.eta = 2.0;
    r.eta_prime = 0.0;
    r.sup_transporter = sup2.transporter;
    r.sup_transporter_rate = sup2.transporter_rate;
    r.sup_rest = sup2.rest;
    r.sup_rest_rate = sup2.rest_rate;

    const double tau = r.stroke_duration;
    const double a = r.sup_transporter, adot = r.sup_transporter_rate;
    const double g = r.sup_rest, gdot = r.sup_rest_rate;
    r.bound_value = std::sqrt(static_cast<double>(r.projector_count)) / (gamma * r.eta) *
                    (1.0 + tau * a + 2.0 * g) *
                    ((2.0 + (r.eta_prime / r.eta) * tau) * (a + g) +
                     tau * (adot + gdot + 2.0 * a * g));

    const Mat u_total = work_stroke_unitary(pg, s, WorkGenerator::Total, 0.0, tau, settings);
    const Mat u_eff = work_stroke_unitary(pg, s, WorkGenerator::Effective, 0.0, tau, settings);
    r.actual_error = norms(u_total - u_eff).operator_norm;
    return r;
}

}  // namespace zeno_otto
