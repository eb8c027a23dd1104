#include "zeno_otto/monte_carlo.hpp"

#include "zeno_otto/parallel.hpp"

#include <cmath>

namespace zeno_otto {

namespace {

Mat basis_projector_2x2(MeasurementBasis basis, MeasOutcome outcome) {
    if (basis == MeasurementBasis::X) {
        return outcome == MeasOutcome::Plus ? ket_plus_projector() : ket_minus_projector();
    }
    return outcome == MeasOutcome::Plus ? Mat::from_rows(2, {1.0, 0.0, 0.0, 0.0})
                                        : Mat::from_rows(2, {0.0, 0.0, 0.0, 1.0});
}

// Sector of a (near-)pure prepared lubricant, if any, as the jump reference.
std::optional<MeasOutcome> prepared_sector(const Mat& rho_sl, MeasurementBasis basis) {
    const double p_plus =
        expectation(tensor_product(Mat::identity(2), basis_projector_2x2(basis, MeasOutcome::Plus)),
                    rho_sl);
    if (p_plus > 1.0 - 1e-9) return MeasOutcome::Plus;
    if (p_plus < 1e-9) return MeasOutcome::Minus;
    return std::nullopt;
}

}  // namespace

Mat lubricant_projector(MeasurementBasis basis, MeasOutcome outcome) {
    return tensor_product(Mat::identity(2), basis_projector_2x2(basis, outcome));
}

MeasurementResult measure_lubricant(const DensityOperator& rho_sl, MeasurementBasis basis,
                                    double u) {
    const Mat p_plus_op = lubricant_projector(basis, MeasOutcome::Plus);
    const Mat p_minus_op = lubricant_projector(basis, MeasOutcome::Minus);
    const double p_plus = expectation(p_plus_op, rho_sl.matrix());
    const double p_minus = expectation(p_minus_op, rho_sl.matrix());
    if (p_plus < 1e-15 && p_minus < 1e-15) {
        throw InvariantViolation("measure_lubricant: both outcome probabilities below 1e-15");
    }

    MeasOutcome outcome;
    if (p_plus < 1e-15) {
        outcome = MeasOutcome::Minus;
    } else if (p_minus < 1e-15) {
        outcome = MeasOutcome::Plus;
    } else {
        outcome = u < p_plus ? MeasOutcome::Plus : MeasOutcome::Minus;
    }

    const Mat& proj = outcome == MeasOutcome::Plus ? p_plus_op : p_minus_op;
    const double prob = outcome == MeasOutcome::Plus ? p_plus : p_minus;
    Mat post = proj * rho_sl.matrix() * proj;
    post *= cx{1.0 / prob, 0.0};
    return {outcome, DensityOperator(post), prob};
}

Mat nonselective_channel(const Mat& rho_sl, MeasurementBasis basis) {
    const Mat pp = lubricant_projector(basis, MeasOutcome::Plus);
    const Mat pm = lubricant_projector(basis, MeasOutcome::Minus);
    return pp * rho_sl * pp + pm * rho_sl * pm;
}

double TrajectoryRecord::total_work() const {
    double s = 0.0;
    for (double w : step_work) s += w;
    return s;
}

double TrajectoryRecord::total_meas_heat() const {
    double s = 0.0;
    for (double q : step_meas_heat) s += q;
    return s;
}

std::vector<Mat> zeno_pulse_propagators(const EngineParams& p, Stage s,
                                        const PropagationSettings& settings) {
    if (!is_work_stroke(s)) throw std::invalid_argument("zeno_pulse_propagators: isochoric stage");
    const int n = p.n_meas;
    const double dt = stroke_duration(p, s) / n;
    std::vector<Mat> pulses;
    pulses.reserve(n);
    for (int k = 0; k < n; ++k) {
        pulses.push_back(work_stroke_unitary(p, s, WorkGenerator::Total, k * dt, (k + 1) * dt,
                                             settings));
    }
    return pulses;
}

TrajectoryRecord run_zeno_stroke_with(const EngineParams& p, Stage s, const std::vector<Mat>& pulses,
                                      const DensityOperator& rho_sl_in, MeasurementBasis basis,
                                      const TrajectoryStream& stream, std::uint64_t step_offset) {
    const int n = p.n_meas;
    if (static_cast<int>(pulses.size()) != n) {
        throw std::invalid_argument("run_zeno_stroke_with: pulse count != n_meas");
    }
    const double dt = stroke_duration(p, s) / n;

    TrajectoryRecord rec;
    rec.outcomes.reserve(n);
    rec.step_work.reserve(n);
    rec.step_meas_heat.reserve(n);

    Mat rho = rho_sl_in.matrix();
    const double e_initial = expectation(h_total(p, s, 0.0), rho);
    double e_post_prev = e_initial;
    std::optional<MeasOutcome> prev = prepared_sector(rho, basis);

    for (int k = 1; k <= n; ++k) {
        const Mat& u = pulses[static_cast<size_t>(k - 1)];
        rho = u * rho * u.dagger();
        const Mat h_k = h_total(p, s, k * dt);
        const double e_pre = expectation(h_k, rho);
        rec.step_work.push_back(e_pre - e_post_prev);

        const double draw = stream.uniform(step_offset + static_cast<std::uint64_t>(k - 1));
        const MeasurementResult m = measure_lubricant(DensityOperator(rho), basis, draw);
        rho = m.post_state.matrix();
        const double e_post = expectation(h_k, rho);
        rec.step_meas_heat.push_back(e_post - e_pre);
        rec.log_prob += std::log(m.prob);
        rec.outcomes.push_back(m.outcome);
        if (prev && m.outcome != *prev) ++rec.jump_count;
        prev = m.outcome;
        e_post_prev = e_post;
    }

    rec.final_state = DensityOperator(rho);
    const double closure = std::abs(e_post_prev - e_initial - rec.total_work() - rec.total_meas_heat());
    if (closure > 1e-8) {
        throw InvariantViolation("zeno stroke bookkeeping residual " + std::to_string(closure));
    }
    return rec;
}

TrajectoryRecord run_zeno_stroke(const EngineParams& p, Stage s, const DensityOperator& rho_sl_in,
                                 MeasurementBasis basis, const TrajectoryStream& stream,
                                 std::uint64_t step_offset, const PropagationSettings& settings) {
    return run_zeno_stroke_with(p, s, zeno_pulse_propagators(p, s, settings), rho_sl_in, basis,
                                stream, step_offset);
}

TrajectoryEnsemble run_ensemble(const EngineParams& p, Stage s, const DensityOperator& rho_sl_in,
                                MeasurementBasis basis, int n_traj, std::uint64_t master_seed,
                                const PropagationSettings& settings, int workers,
                                std::uint64_t step_offset) {
    if (n_traj < 1) throw std::invalid_argument("run_ensemble: n_traj must be >= 1");
    const std::vector<Mat> pulses = zeno_pulse_propagators(p, s, settings);

    TrajectoryEnsemble ens;
    ens.records.resize(static_cast<size_t>(n_traj),
                       TrajectoryRecord{});
    parallel_for(static_cast<size_t>(n_traj), workers, [&](size_t i) {
        const TrajectoryStream stream{master_seed, static_cast<std::uint64_t>(i)};
        ens.records[i] = run_zeno_stroke_with(p, s, pulses, rho_sl_in, basis, stream, step_offset);
    });

    double sum_w = 0.0, sum_q = 0.0;
    for (const TrajectoryRecord& r : ens.records) {
        sum_w += r.total_work();
        sum_q += r.total_meas_heat();
    }
    ens.mean_work = sum_w / n_traj;
    ens.mean_meas_heat = sum_q / n_traj;
    double ss = 0.0;
    for (const TrajectoryRecord& r : ens.records) {
        const double d = r.total_work() - ens.mean_work;
        ss += d * d;
    }
    ens.std_work = n_traj > 1 ? std::sqrt(ss / (n_traj - 1)) : 0.0;
    return ens;
}

double entropy_production(double p_first, double p_last_marginal) {
    if (!(p_last_marginal > 0.0)) {
        throw std::invalid_argument("entropy_production: zero final-outcome marginal");
    }
    return std::log(p_first / p_last_marginal);
}

double final_outcome_marginal(const EngineParams& p, Stage s, const DensityOperator& rho_sl_in,
                              MeasurementBasis basis, MeasOutcome target,
                              const PropagationSettings& settings) {
    const std::vector<Mat> pulses = zeno_pulse_propagators(p, s, settings);
    Mat rho = rho_sl_in.matrix();
    for (int k = 0; k + 1 < p.n_meas; ++k) {
        const Mat& u = pulses[static_cast<size_t>(k)];
        rho = nonselective_channel(u * rho * u.dagger(), basis);
    }
    const Mat& u_last = pulses.back();
    rho = u_last * rho * u_last.dagger();
    return expectation(lubricant_projector(basis, target), rho);
}

double zeno_entropy_production_exact(const EngineParams& p, Stage s,
                                     const DensityOperator& rho_sl_in, MeasurementBasis basis,
                                     const PropagationSettings& settings) {
    const double p_first =
        expectation(lubricant_projector(basis, MeasOutcome::Plus), rho_sl_in.matrix());
    const double p_last = final_outcome_marginal(p, s, rho_sl_in, basis, MeasOutcome::Plus, settings);
    return entropy_production(p_first, p_last);
}

double zeno_entropy_production_sampled(const TrajectoryEnsemble& ensemble, MeasOutcome target) {
    if (ensemble.records.empty()) throw std::invalid_argument("empty ensemble");
    int hits = 0;
    for (const TrajectoryRecord& r : ensemble.records) {
        if (!r.outcomes.empty() && r.outcomes.back() == target) ++hits;
    }
    const double freq = static_cast<double>(hits) / ensemble.records.size();
    return entropy_production(1.0, freq);
}

}  // namespace zeno_otto
