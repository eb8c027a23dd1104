#include "zeno_otto/model.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace zeno_otto;

namespace {

EngineParams fig3_params() {
    EngineParams p;
    p.omega = 1.0;
    p.omega_l = 1.0;
    p.omega0 = 5.0;
    p.t_c = 0.5;
    return p;
}

Mat projector0(const EngineParams& p, Stage s, double t) {
    const InstantaneousBasis b = instantaneous_basis(p, s, t);
    const cx k0[2] = {b.ket0[0], b.ket0[1]};
    return outer(k0, k0);
}

}  // namespace

TEST_CASE("system hamiltonian across the cycle") {
    EngineParams p = fig3_params();
    p.tau_comp = 5.0;
    p.tau_hot = 3.0;
    p.tau_exp = 2.0;
    p.tau_cold = 4.0;

    CHECK(max_abs_diff(h_system(p, 0.0), 0.5 * pauli_z()) == 0.0);

    const Mat h1 = h_stroke(p, Stage::Compression, p.tau_comp);
    CHECK(max_abs_diff(h1, 0.5 * pauli_z() + 2.5 * pauli_x()) < 1e-15);
    CHECK(stroke_gap(p, Stage::Compression, p.tau_comp) == doctest::Approx(std::sqrt(26.0)));

    // Midpoint of the expansion stroke: drive at half amplitude.
    const Mat hm = h_stroke(p, Stage::Expansion, 0.5 * p.tau_exp);
    CHECK(max_abs_diff(hm, 0.5 * pauli_z() + (p.omega0 / 4.0) * pauli_x()) < 1e-15);

    // Continuity at the stroke boundaries.
    CHECK(max_abs_diff(h_stroke(p, Stage::Compression, p.tau_comp), h_hot(p)) < 1e-15);
    CHECK(max_abs_diff(h_stroke(p, Stage::HotIsochore, 1.0), h_hot(p)) == 0.0);
    CHECK(max_abs_diff(h_stroke(p, Stage::Expansion, 0.0), h_hot(p)) < 1e-15);
    CHECK(max_abs_diff(h_stroke(p, Stage::Expansion, p.tau_exp), h_cold(p)) < 1e-15);
    CHECK(max_abs_diff(h_stroke(p, Stage::ColdIsochore, 2.0), h_cold(p)) == 0.0);

    CHECK_THROWS_AS(h_system(p, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(h_system(p, p.cycle_time()), std::invalid_argument);

    const StrokeClock clock = stage_at(p, p.tau_comp + 1.0);
    CHECK(clock.stage == Stage::HotIsochore);
    CHECK(clock.local_t == doctest::Approx(1.0));
    CHECK(stage_at(p, p.cycle_time() + 0.5).stage == Stage::Compression);
}

TEST_CASE("instantaneous basis") {
    EngineParams p = fig3_params();
    p.tau_comp = 5.0;
    p.tau_exp = 2.5;

    const InstantaneousBasis b0 = instantaneous_basis(p, Stage::Compression, 0.0);
    CHECK(b0.angle == 0.0);
    CHECK(std::abs(b0.ket0[0] - cx{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(b0.ket1[1] - cx{-1.0, 0.0}) < 1e-15);

    EngineParams q = p;
    q.omega0 = 1.0;
    q.tau_comp = 1.0;
    CHECK(instantaneous_basis(q, Stage::Compression, 1.0).angle == doctest::Approx(M_PI / 4.0));

    CHECK(instantaneous_basis(p, Stage::Expansion, p.tau_exp).angle == 0.0);

    // Eigen-relation residual and orthogonality on a grid, both strokes.
    for (Stage s : {Stage::Compression, Stage::Expansion}) {
        const double tau = stroke_duration(p, s);
        for (int k = 0; k <= 50; ++k) {
            const double t = tau * k / 50.0;
            const InstantaneousBasis b = instantaneous_basis(p, s, t);
            const Mat h = h_stroke(p, s, t);
            cx overlap = 0.0;
            for (int r = 0; r < 2; ++r) overlap += std::conj(b.ket0[r]) * b.ket1[r];
            CHECK(std::abs(overlap) < 1e-12);
            for (int r = 0; r < 2; ++r) {
                cx h0 = 0.0, h1 = 0.0;
                for (int c = 0; c < 2; ++c) {
                    h0 += h(r, c) * b.ket0[c];
                    h1 += h(r, c) * b.ket1[c];
                }
                CHECK(std::abs(h0 - 0.5 * b.gap * b.ket0[r]) < 1e-12);
                CHECK(std::abs(h1 + 0.5 * b.gap * b.ket1[r]) < 1e-12);
            }
            CHECK(b.gap >= p.omega - 1e-12);  // no level crossing
        }
    }

    CHECK_THROWS_AS(instantaneous_basis(p, Stage::HotIsochore, 0.0), std::invalid_argument);
}

TEST_CASE("counter-diabatic term") {
    SUBCASE("frozen value at t=0") {
        EngineParams p;
        p.omega = 1.0;
        p.omega0 = 1.0;
        p.tau_comp = 1.0;
        // theta_dot(0) = 1, so A(0) = Y/2.
        const Mat a = counter_diabatic(p, Stage::Compression, 0.0);
        CHECK(max_abs_diff(a, 0.5 * pauli_y()) < 1e-14);
    }

    SUBCASE("hermitian, traceless, off-diagonal in the instantaneous basis") {
        EngineParams p = fig3_params();
        p.tau_comp = 3.0;
        p.tau_exp = 1.5;
        for (Stage s : {Stage::Compression, Stage::Expansion}) {
            for (int k = 0; k <= 20; ++k) {
                const double t = stroke_duration(p, s) * k / 20.0;
                const Mat a = counter_diabatic(p, s, t);
                CHECK(a.is_hermitian(1e-14));
                CHECK(std::abs(a.trace()) < 1e-14);
                const InstantaneousBasis b = instantaneous_basis(p, s, t);
                cx diag = 0.0;
                for (int r = 0; r < 2; ++r)
                    for (int c = 0; c < 2; ++c) diag += std::conj(b.ket0[r]) * a(r, c) * b.ket0[c];
                CHECK(std::abs(diag) < 1e-12);
            }
        }
    }

    SUBCASE("quasistatic suppression") {
        EngineParams p = fig3_params();
        p.tau_comp = 500.0;
        double sup = 0.0;
        for (int k = 0; k <= 100; ++k) {
            const double t = p.tau_comp * k / 100.0;
            sup = std::max(sup, norms(counter_diabatic(p, Stage::Compression, t)).operator_norm);
        }
        CHECK(sup < 6e-3);
    }

    SUBCASE("finite-difference projector oracle") {
        std::mt19937_64 gen{31};
        std::uniform_real_distribution<double> ud(0.0, 1.0);
        for (int trial = 0; trial < 200; ++trial) {
            EngineParams p;
            p.omega = 0.5 + 2.0 * ud(gen);
            p.omega0 = 0.5 + 5.0 * ud(gen);
            p.tau_comp = 1.0 + 9.0 * ud(gen);
            p.tau_exp = 1.0 + 9.0 * ud(gen);
            const Stage s = trial % 2 == 0 ? Stage::Compression : Stage::Expansion;
            const double tau = stroke_duration(p, s);
            const double t = (0.05 + 0.9 * ud(gen)) * tau;
            const double h = 1e-6;
            Mat dp = projector0(p, s, t + h) - projector0(p, s, t - h);
            dp *= cx{1.0 / (2.0 * h), 0.0};
            Mat expected = commutator(dp, projector0(p, s, t));
            expected *= cx{0.0, 1.0};  // i [dP/dt, P]
            CHECK(max_abs_diff(expected, counter_diabatic(p, s, t)) < 1e-5);
        }
    }

    SUBCASE("analytic angle derivatives match finite differences") {
        EngineParams p = fig3_params();
        p.tau_comp = 4.0;
        p.tau_exp = 2.0;
        const double h = 1e-6;
        for (Stage s : {Stage::Compression, Stage::Expansion}) {
            const double tau = stroke_duration(p, s);
            for (int k = 1; k < 20; ++k) {
                const double t = tau * k / 20.0;
                const double fd_rate =
                    (drive_angle(p, s, t + h) - drive_angle(p, s, t - h)) / (2.0 * h);
                CHECK(drive_angle_rate(p, s, t) == doctest::Approx(fd_rate).epsilon(1e-6));
                const double fd_accel =
                    (drive_angle_rate(p, s, t + h) - drive_angle_rate(p, s, t - h)) / (2.0 * h);
                CHECK(drive_angle_accel(p, s, t) == doctest::Approx(fd_accel).epsilon(1e-4));
            }
        }
    }
}

TEST_CASE("joint hamiltonians") {
    EngineParams p = fig3_params();
    p.tau_comp = 5.0;
    p.tau_exp = 2.5;
    p.gamma_comp = p.gamma_exp = 20.0;

    SUBCASE("decoupled limit") {
        EngineParams q = p;
        q.gamma_comp = q.gamma_exp = 0.0;
        q.omega_l = 0.0;
        const Mat h = h_total(q, Stage::Compression, 1.0);
        CHECK(max_abs_diff(h, tensor_product(h_stroke(q, Stage::Compression, 1.0),
                                             Mat::identity(2))) < 1e-15);
    }

    SUBCASE("structure at t=0") {
        const Mat h = h_total(p, Stage::Compression, 0.0);
        const Mat expected = p.gamma_comp * tensor_product(pauli_z(), pauli_x()) +
                             0.5 * p.omega * tensor_product(pauli_z(), Mat::identity(2)) +
                             0.5 * p.omega_l * tensor_product(Mat::identity(2), pauli_z());
        CHECK(max_abs_diff(h, expected) < 1e-14);
    }

    SUBCASE("norm grows linearly in the coupling") {
        double prev_dev = 1e9;
        for (double g : {10.0, 100.0, 1000.0}) {
            EngineParams q = p;
            q.gamma_comp = q.gamma_exp = g;
            const double ratio = norms(h_total(q, Stage::Compression, 2.0)).operator_norm / g;
            CHECK(ratio >= 1.0);
            CHECK(ratio <= 1.0 + 5.0 / g);
            const double dev = std::abs(ratio - 1.0);
            CHECK(dev < prev_dev);
            prev_dev = dev;
        }
    }

    SUBCASE("effective minus total is coupling-independent") {
        const Mat id2 = Mat::identity(2);
        for (double t : {0.0, 1.3, 4.9}) {
            const Mat diff = h_total(p, Stage::Compression, t) - h_effective(p, Stage::Compression, t);
            const Mat expected = tensor_product(id2, h_lubricant(p)) -
                                 tensor_product(counter_diabatic(p, Stage::Compression, t), id2);
            CHECK(max_abs_diff(diff, expected) < 1e-13);

            EngineParams q = p;
            q.gamma_comp = q.gamma_exp = 1000.0;
            const Mat diff_big =
                h_total(q, Stage::Compression, t) - h_effective(q, Stage::Compression, t);
            CHECK(std::abs(norms(diff).operator_norm - norms(diff_big).operator_norm) < 1e-12);
        }

        EngineParams q = p;
        q.omega_l = 0.0;
        q.tau_comp = 500.0;
        const Mat diff = h_total(q, Stage::Compression, 250.0) -
                         h_effective(q, Stage::Compression, 250.0);
        CHECK(norms(diff).operator_norm < 6e-3);
    }

    SUBCASE("system block of the effective generator is the counter-diabatic drive") {
        const double t = 2.0;
        const Mat rest = h_effective(p, Stage::Compression, t) - h_interaction(p, Stage::Compression, t);
        const Mat block = partial_trace(rest, Subsystem::First);
        Mat expected = h_stroke(p, Stage::Compression, t) + counter_diabatic(p, Stage::Compression, t);
        expected *= cx{2.0, 0.0};  // partial trace over the identity factor
        CHECK(max_abs_diff(block, expected) < 1e-13);
    }
}

TEST_CASE("zeno projectors and sector hamiltonians") {
    EngineParams p = fig3_params();
    p.tau_comp = 5.0;
    p.tau_exp = 2.5;
    p.gamma_comp = p.gamma_exp = 20.0;

    SUBCASE("projector family") {
        for (int k = 0; k <= 100; ++k) {
            const double t = p.tau_comp * k / 100.0;
            const auto [pp, pm] = zeno_projectors(p, Stage::Compression, t);
            CHECK(norms(pp * pp - pp).operator_norm < 1e-12);
            CHECK(norms(pm * pm - pm).operator_norm < 1e-12);
            CHECK(max_abs_diff(pp + pm, Mat::identity(4)) < 1e-13);
            CHECK(norms(pp * pm).operator_norm < 1e-12);
            const Mat rx = tensor_product(r_operator(p, Stage::Compression, t), pauli_x());
            CHECK(norms(commutator(pp, rx)).operator_norm < 1e-12);
        }
    }

    SUBCASE("t=0 structure") {
        const auto [pp, pm] = zeno_projectors(p, Stage::Compression, 0.0);
        const Mat expected =
            tensor_product(Mat::from_rows(2, {1.0, 0.0, 0.0, 0.0}), ket_plus_projector()) +
            tensor_product(Mat::from_rows(2, {0.0, 0.0, 0.0, 1.0}), ket_minus_projector());
        CHECK(max_abs_diff(pp, expected) < 1e-14);
    }

    SUBCASE("sector support and sign structure") {
        const double t = 1.7;
        const Mat hz_plus = zeno_hamiltonian(p, Stage::Compression, t, LubricantSector::Plus);
        const Mat hz_minus = zeno_hamiltonian(p, Stage::Compression, t, LubricantSector::Minus);
        const Mat pm4 = tensor_product(Mat::identity(2), ket_minus_projector());
        CHECK(norms(pm4 * hz_plus * pm4).operator_norm < 1e-13);

        // The two sectors differ only in the sign of the coupling term
        // (the sector projectors have unit trace, so Tr_L extracts the block).
        const Mat sys_plus = partial_trace(hz_plus, Subsystem::First);
        const Mat sys_minus = partial_trace(hz_minus, Subsystem::First);
        const Mat cd = h_stroke(p, Stage::Compression, t) + counter_diabatic(p, Stage::Compression, t);
        const Mat r = r_operator(p, Stage::Compression, t);
        CHECK(max_abs_diff(sys_plus, p.gamma_comp * r + cd) < 1e-12);
        CHECK(max_abs_diff(sys_minus, cx{-1.0, 0.0} * (p.gamma_comp * r) + cd) < 1e-12);
    }

    SUBCASE("projected total plus transporter equals projected effective") {
        // Monitoring-first and strong-coupling-first orderings agree in the X basis.
        for (double t : {0.4, 2.2, 4.8}) {
            for (LubricantSector sector : {LubricantSector::Plus, LubricantSector::Minus}) {
                const Mat proj = tensor_product(Mat::identity(2),
                                                sector == LubricantSector::Plus
                                                    ? ket_plus_projector()
                                                    : ket_minus_projector());
                const Mat lhs =
                    proj * h_total(p, Stage::Compression, t) * proj +
                    tensor_product(counter_diabatic(p, Stage::Compression, t),
                                   sector == LubricantSector::Plus ? ket_plus_projector()
                                                                   : ket_minus_projector());
                const Mat rhs = proj * h_effective(p, Stage::Compression, t) * proj;
                CHECK(max_abs_diff(lhs, rhs) < 1e-12);
                CHECK(max_abs_diff(rhs, zeno_hamiltonian(p, Stage::Compression, t, sector)) < 1e-12);
            }
        }
    }
}

TEST_CASE("thermal states") {
    EngineParams p;
    p.omega = 1.0;

    const DensityOperator cold = thermal_state(h_cold(p), 0.5);
    CHECK(cold.matrix()(0, 0).real() == doctest::Approx(1.0 / (1.0 + std::exp(2.0))).epsilon(1e-10));
    CHECK(cold.matrix()(0, 0).real() == doctest::Approx(0.1192).epsilon(1e-3));
    CHECK(std::abs(cold.matrix()(0, 1)) < 1e-15);

    const DensityOperator hot_limit = thermal_state(h_cold(p), 1e6);
    CHECK(std::abs(hot_limit.matrix()(0, 0).real() - 0.5) < 1e-5);

    p.omega0 = 3.01105;
    const DensityOperator hot = thermal_state(h_hot(p), 3.0);
    const double q0 = 1.0 / (1.0 + std::exp(p.big_omega() / 3.0));
    // Excited population in the H_hot eigenbasis.
    const EigenSystem es = hermitian_eigensystem(h_hot(p));
    cx pop = 0.0;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
            pop += std::conj(es.vectors(r, 1)) * hot.matrix()(r, c) * es.vectors(c, 1);
    CHECK(pop.real() == doctest::Approx(q0).epsilon(1e-10));
    CHECK(q0 == doctest::Approx(0.2577).epsilon(2e-3));

    CHECK_THROWS_AS(thermal_state(h_cold(p), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(thermal_state(h_cold(p), -1.0), std::invalid_argument);
}

TEST_CASE("engine params validation") {
    EngineParams p;
    CHECK_NOTHROW(p.validate());
    CHECK(p.big_omega() == doctest::Approx(std::hypot(1.0, 3.01105)));
    CHECK(p.work_extraction_regime());

    EngineParams bad = p;
    bad.omega = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = p;
    bad.tau_cold = -1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = p;
    bad.n_meas = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = p;
    bad.lubricant_plus_weight = 1.5;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}
