#include "zeno_otto/ledger.hpp"

#include <cmath>
#include <limits>

namespace zeno_otto {

IdealOtto ideal_otto(const EngineParams& p) {
    const double omega_big = p.big_omega();
    const double th_cold = std::tanh(p.omega / (2.0 * p.t_c));
    const double th_hot = std::tanh(omega_big / (2.0 * p.t_h));
    IdealOtto out;
    out.w_comp = -0.5 * (omega_big - p.omega) * th_cold;
    out.w_exp = 0.5 * (omega_big - p.omega) * th_hot;
    out.w_tot = 0.5 * (omega_big - p.omega) * (th_hot - th_cold);
    out.q_hot = 0.5 * omega_big * (th_cold - th_hot);
    out.q_cold = -(p.omega / omega_big) * out.q_hot;
    out.eta_otto = 1.0 - p.omega / omega_big;
    out.eta_carnot = 1.0 - p.t_c / p.t_h;
    out.eta_ca = 1.0 - std::sqrt(p.t_c / p.t_h);
    out.extraction_ok = p.work_extraction_regime();
    return out;
}

double stroke_work(const Mat& h_i, const Mat& h_f, const DensityOperator& rho_i,
                   const DensityOperator& rho_f) {
    if (h_i.dim() != rho_i.dim() || h_f.dim() != rho_f.dim()) {
        throw std::invalid_argument("stroke_work: dimension mismatch");
    }
    return expectation(h_f, rho_f.matrix()) - expectation(h_i, rho_i.matrix());
}

double stroke_gap_rate(const EngineParams& p, Stage s, double local_t) {
    if (!is_work_stroke(s)) throw std::invalid_argument("stroke_gap_rate: isochoric stage");
    const double tau = stroke_duration(p, s);
    const double x = s == Stage::Compression ? local_t : tau - local_t;
    const double xdot = s == Stage::Compression ? 1.0 : -1.0;
    const double a = p.omega0 / tau;
    return a * a * x * xdot / stroke_gap(p, s, local_t);
}

namespace {

// Composite Simpson on a uniform grid; trapezoid on a trailing odd interval.
double integrate_uniform(const std::vector<double>& f, double dt) {
    const size_t n = f.size();
    if (n < 2) return 0.0;
    double total = 0.0;
    size_t i = 0;
    for (; i + 2 < n; i += 2) total += (dt / 3.0) * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
    if (i + 1 < n) total += 0.5 * dt * (f[i] + f[i + 1]);
    return total;
}

cx sandwich(const std::array<cx, 2>& bra, const Mat& m, const std::array<cx, 2>& ket) {
    cx out = 0.0;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) out += std::conj(bra[r]) * m(r, c) * ket[c];
    return out;
}

}  // namespace

FrictionSplit friction_work(const EngineParams& p, Stage s, const std::vector<double>& times,
                            const std::vector<Mat>& rho_path) {
    if (!is_work_stroke(s)) throw std::invalid_argument("friction_work: isochoric stage");
    if (times.size() != rho_path.size() || times.size() < 3) {
        throw std::invalid_argument("friction_work: inconsistent sampling grids");
    }
    const double dt = times[1] - times[0];
    for (size_t k = 1; k < times.size(); ++k) {
        if (std::abs(times[k] - times[k - 1] - dt) > 1e-9 * std::max(1.0, dt)) {
            throw std::invalid_argument("friction_work: non-uniform sampling grid");
        }
    }

    std::vector<double> pop(times.size()), coh(times.size());
    for (size_t k = 0; k < times.size(); ++k) {
        const double t = times[k];
        const InstantaneousBasis b = instantaneous_basis(p, s, t);
        const Mat& rho = rho_path[k];
        const double p00 = sandwich(b.ket0, rho, b.ket0).real();
        const double p11 = sandwich(b.ket1, rho, b.ket1).real();
        const double re01 = sandwich(b.ket0, rho, b.ket1).real();
        pop[k] = 0.5 * stroke_gap_rate(p, s, t) * (p00 - p11);
        coh[k] = -b.gap * drive_angle_rate(p, s, t) * re01;
    }
    return {integrate_uniform(coh, dt), integrate_uniform(pop, dt)};
}

double joint_work_strong_coupling(const EngineParams& p, const DensityOperator& rho_sl_t0,
                                  const DensityOperator& rho_sl_t1, const DensityOperator& rho_sl_t2,
                                  const DensityOperator& rho_sl_t3) {
    const double w_comp = expectation(h_total(p, Stage::Compression, p.tau_comp), rho_sl_t1.matrix()) -
                          expectation(h_total(p, Stage::Compression, 0.0), rho_sl_t0.matrix());
    const double w_exp = expectation(h_total(p, Stage::Expansion, p.tau_exp), rho_sl_t3.matrix()) -
                         expectation(h_total(p, Stage::Expansion, 0.0), rho_sl_t2.matrix());
    return w_comp + w_exp;
}

double decoupling_cost(const EngineParams& p, Stage s, const DensityOperator& rho_sl_final,
                       const Mat& rho_s_initial, const Mat& rho_l_initial) {
    const double tau = stroke_duration(p, s);
    const double e_final = expectation(h_interaction(p, s, tau), rho_sl_final.matrix());
    const double e_initial =
        expectation(h_interaction(p, s, 0.0), tensor_product(rho_s_initial, rho_l_initial));
    return e_final - e_initial;
}

MeasurementCost measurement_energy_cost(const DensityOperator& rho_before, const Mat& h,
                                        MeasurementBasis basis, double beta_reset) {
    const Mat post = nonselective_channel(rho_before.matrix(), basis);
    MeasurementCost cost;
    cost.heat_part = expectation(h, post - rho_before.matrix());
    double shannon = 0.0;
    for (MeasOutcome l : {MeasOutcome::Plus, MeasOutcome::Minus}) {
        const double pl = expectation(lubricant_projector(basis, l), rho_before.matrix());
        if (pl > 0.0) shannon -= pl * std::log(pl);
    }
    cost.reset_part = shannon / beta_reset;
    return cost;
}

namespace {

double norm_factor(DriveNorm norm) { return norm == DriveNorm::Trace ? 4.0 : 2.0; }

}  // namespace

double drive_cost(const EngineParams& p, Stage s, DriveNorm norm) {
    // ||Gamma R(t) (x) X||: singular values are all Gamma, so the norm is
    // constant along the stroke and the integral is exact.
    return p.nu * norm_factor(norm) * coupling_strength(p, s) * stroke_duration(p, s);
}

double drive_cost_quadrature(const EngineParams& p, Stage s, DriveNorm norm, int grid_points) {
    if (grid_points < 2) throw std::invalid_argument("drive_cost_quadrature: grid too small");
    const double tau = stroke_duration(p, s);
    const double dt = tau / grid_points;
    double integral = 0.0;
    for (int k = 0; k <= grid_points; ++k) {
        const MatrixNorms nm = norms(h_interaction(p, s, k * dt));
        const double value = norm == DriveNorm::Trace ? nm.trace_norm : nm.frobenius_norm;
        integral += (k == 0 || k == grid_points) ? 0.5 * value : value;
    }
    return p.nu * integral * dt;
}

double net_power(const EngineParams& p, double power_tot, double nu, DriveNorm norm) {
    const double per_cycle = norm_factor(norm) * nu *
                             (p.gamma_comp * p.tau_comp + p.gamma_exp * p.tau_exp);
    return power_tot - per_cycle / p.cycle_time();
}

ThermalizationEstimate thermalization_time(const EngineParams& p, Bath b) {
    ThermalizationEstimate est;
    est.n_bar = bath_occupation(p, b);
    const double gamma = b == Bath::Hot ? p.gamma_h : p.gamma_c;
    est.lambda_gap = 0.5 * gamma * (2.0 * est.n_bar + 1.0);
    est.tau_estimate = est.lambda_gap > 0.0 ? 1.0 / est.lambda_gap
                                            : std::numeric_limits<double>::infinity();
    return est;
}

double coherence_l1(const DensityOperator& rho_s, const Mat& h_ref) {
    if (rho_s.dim() != 2 || h_ref.dim() != 2) {
        throw std::invalid_argument("coherence_l1: expects qubit operators");
    }
    const EigenSystem es = hermitian_eigensystem(h_ref);
    const double scale = std::max(std::abs(es.values[0]), std::abs(es.values[1]));
    if (std::abs(es.values[1] - es.values[0]) <= 1e-12 * std::max(1.0, scale)) {
        throw std::invalid_argument("coherence_l1: degenerate reference Hamiltonian");
    }
    cx off = 0.0;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
            off += std::conj(es.vectors(r, 0)) * rho_s.matrix()(r, c) * es.vectors(c, 1);
    return 2.0 * std::abs(off);
}

double log_negativity(const DensityOperator& rho_sl) {
    const double tn = norms(partial_transpose(rho_sl.matrix(), Subsystem::Second)).trace_norm;
    return std::max(0.0, std::log2(tn));
}

}  // namespace zeno_otto
