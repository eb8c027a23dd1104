#include "zeno_otto/model.hpp"

#include <algorithm>
#include <cmath>

namespace zeno_otto {

namespace {

void require_work_stroke(Stage s, const char* op) {
    if (!is_work_stroke(s)) {
        throw std::invalid_argument(std::string(op) + " is defined on work strokes only, got " +
                                    stage_name(s));
    }
}

// Dimensionless drive slope: angle = arctan(slope * progress-coordinate).
double drive_slope(const EngineParams& p, Stage s) {
    return p.omega0 / (p.omega * stroke_duration(p, s));
}

// Time-to-go coordinate: t on compression, tau_exp - t on expansion.
double angle_coordinate(Stage s, double local_t, double tau) {
    return s == Stage::Compression ? local_t : tau - local_t;
}

}  // namespace

bool is_work_stroke(Stage s) { return s == Stage::Compression || s == Stage::Expansion; }

const char* stage_name(Stage s) {
    switch (s) {
        case Stage::Compression: return "compression";
        case Stage::HotIsochore: return "hot_isochore";
        case Stage::Expansion: return "expansion";
        case Stage::ColdIsochore: return "cold_isochore";
    }
    return "?";
}

StrokeClock stage_at(const EngineParams& p, double cycle_t) {
    const double tau = p.cycle_time();
    double t = std::fmod(cycle_t, tau);
    if (t < 0.0) t += tau;
    if (t < p.tau_comp) return {Stage::Compression, t};
    t -= p.tau_comp;
    if (t < p.tau_hot) return {Stage::HotIsochore, t};
    t -= p.tau_hot;
    if (t < p.tau_exp) return {Stage::Expansion, t};
    return {Stage::ColdIsochore, t - p.tau_exp};
}

double stroke_duration(const EngineParams& p, Stage s) {
    switch (s) {
        case Stage::Compression: return p.tau_comp;
        case Stage::HotIsochore: return p.tau_hot;
        case Stage::Expansion: return p.tau_exp;
        case Stage::ColdIsochore: return p.tau_cold;
    }
    return 0.0;
}

double coupling_strength(const EngineParams& p, Stage s) {
    require_work_stroke(s, "coupling_strength");
    return s == Stage::Compression ? p.gamma_comp : p.gamma_exp;
}

Mat h_cold(const EngineParams& p) { return 0.5 * p.omega * pauli_z(); }

Mat h_hot(const EngineParams& p) { return 0.5 * p.omega * pauli_z() + 0.5 * p.omega0 * pauli_x(); }

Mat h_lubricant(const EngineParams& p) { return 0.5 * p.omega_l * pauli_z(); }

Mat h_stroke(const EngineParams& p, Stage s, double local_t) {
    const double tau = stroke_duration(p, s);
    // Accumulated k*dt endpoints can overshoot tau by an ulp; clamp those.
    const double slack = 1e-9 * std::max(1.0, tau);
    if (local_t < -slack || local_t > tau + slack) {
        throw std::invalid_argument("h_stroke: local time out of [0, tau_stroke]");
    }
    local_t = std::min(std::max(local_t, 0.0), tau);
    switch (s) {
        case Stage::Compression:
            return 0.5 * p.omega * pauli_z() + (0.5 * p.omega0 * local_t / tau) * pauli_x();
        case Stage::HotIsochore: return h_hot(p);
        case Stage::Expansion:
            return 0.5 * p.omega * pauli_z() + (0.5 * p.omega0 * (tau - local_t) / tau) * pauli_x();
        case Stage::ColdIsochore: return h_cold(p);
    }
    return Mat(2);
}

Mat h_system(const EngineParams& p, double cycle_t) {
    if (cycle_t < 0.0 || cycle_t >= p.cycle_time()) {
        throw std::invalid_argument("h_system: cycle time out of [0, tau)");
    }
    const StrokeClock clock = stage_at(p, cycle_t);
    return h_stroke(p, clock.stage, clock.local_t);
}

double drive_angle(const EngineParams& p, Stage s, double local_t) {
    require_work_stroke(s, "drive_angle");
    const double x = angle_coordinate(s, local_t, stroke_duration(p, s));
    return std::atan(drive_slope(p, s) * x);
}

double drive_angle_rate(const EngineParams& p, Stage s, double local_t) {
    require_work_stroke(s, "drive_angle_rate");
    const double u = drive_slope(p, s);
    const double x = angle_coordinate(s, local_t, stroke_duration(p, s));
    const double rate = u / (1.0 + u * u * x * x);
    return s == Stage::Compression ? rate : -rate;
}

double drive_angle_accel(const EngineParams& p, Stage s, double local_t) {
    require_work_stroke(s, "drive_angle_accel");
    const double u = drive_slope(p, s);
    const double x = angle_coordinate(s, local_t, stroke_duration(p, s));
    const double den = 1.0 + u * u * x * x;
    // Same sign for both strokes: d/dt flips once for vartheta and once for x.
    return -2.0 * u * u * u * x / (den * den);
}

double stroke_gap(const EngineParams& p, Stage s, double local_t) {
    require_work_stroke(s, "stroke_gap");
    const double tau = stroke_duration(p, s);
    const double x = angle_coordinate(s, local_t, tau);
    return std::hypot(p.omega, p.omega0 * x / tau);
}

InstantaneousBasis instantaneous_basis(const EngineParams& p, Stage s, double local_t) {
    InstantaneousBasis b;
    b.angle = drive_angle(p, s, local_t);
    b.gap = stroke_gap(p, s, local_t);
    const double c = std::cos(0.5 * b.angle), sn = std::sin(0.5 * b.angle);
    b.ket0 = {cx{c, 0.0}, cx{sn, 0.0}};
    b.ket1 = {cx{sn, 0.0}, cx{-c, 0.0}};
    return b;
}

Mat r_operator(const EngineParams& p, Stage s, double local_t) {
    const double angle = drive_angle(p, s, local_t);
    return std::cos(angle) * pauli_z() + std::sin(angle) * pauli_x();
}

Mat counter_diabatic(const EngineParams& p, Stage s, double local_t) {
    return 0.5 * drive_angle_rate(p, s, local_t) * pauli_y();
}

Mat h_interaction(const EngineParams& p, Stage s, double local_t) {
    return coupling_strength(p, s) * tensor_product(r_operator(p, s, local_t), pauli_x());
}

Mat h_total(const EngineParams& p, Stage s, double local_t) {
    require_work_stroke(s, "h_total");
    const Mat id2 = Mat::identity(2);
    return tensor_product(h_stroke(p, s, local_t), id2) + tensor_product(id2, h_lubricant(p)) +
           h_interaction(p, s, local_t);
}

Mat h_effective(const EngineParams& p, Stage s, double local_t) {
    require_work_stroke(s, "h_effective");
    const Mat cd = h_stroke(p, s, local_t) + counter_diabatic(p, s, local_t);
    return h_interaction(p, s, local_t) + tensor_product(cd, Mat::identity(2));
}

Mat ket_plus_projector() {
    return Mat::from_rows(2, {0.5, 0.5, 0.5, 0.5});
}

Mat ket_minus_projector() {
    return Mat::from_rows(2, {0.5, -0.5, -0.5, 0.5});
}

Mat zeno_hamiltonian(const EngineParams& p, Stage s, double local_t, LubricantSector sector) {
    require_work_stroke(s, "zeno_hamiltonian");
    const double sign = sector == LubricantSector::Plus ? 1.0 : -1.0;
    const Mat sector_proj = sector == LubricantSector::Plus ? ket_plus_projector()
                                                            : ket_minus_projector();
    const Mat cd = h_stroke(p, s, local_t) + counter_diabatic(p, s, local_t);
    return tensor_product(sign * coupling_strength(p, s) * r_operator(p, s, local_t) + cd,
                          sector_proj);
}

std::pair<Mat, Mat> zeno_projectors(const EngineParams& p, Stage s, double local_t) {
    require_work_stroke(s, "zeno_projectors");
    const InstantaneousBasis b = instantaneous_basis(p, s, local_t);
    const cx k0[2] = {b.ket0[0], b.ket0[1]};
    const cx k1[2] = {b.ket1[0], b.ket1[1]};
    const Mat p_plus = tensor_product(outer(k0, k0), ket_plus_projector()) +
                       tensor_product(outer(k1, k1), ket_minus_projector());
    return {p_plus, Mat::identity(4) - p_plus};
}

DensityOperator thermal_state(const Mat& h, double temperature) {
    if (!(temperature > 0.0)) throw std::invalid_argument("thermal_state: temperature must be > 0");
    const EigenSystem es = hermitian_eigensystem(h);
    const int n = h.dim();
    // Shift by the ground energy before exponentiating.
    const double e0 = es.values.front();
    double z = 0.0;
    std::vector<double> w(n);
    for (int k = 0; k < n; ++k) {
        w[k] = std::exp(-(es.values[k] - e0) / temperature);
        z += w[k];
    }
    Mat rho(n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            cx sum = 0.0;
            for (int k = 0; k < n; ++k)
                sum += es.vectors(r, k) * (w[k] / z) * std::conj(es.vectors(c, k));
            rho(r, c) = sum;
        }
    return DensityOperator(rho);
}

Mat lubricant_initial_state(const EngineParams& p) {
    const double w = p.lubricant_plus_weight;
    return w * ket_plus_projector() + (1.0 - w) * ket_minus_projector();
}

}  // namespace zeno_otto
