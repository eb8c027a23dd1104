#pragma once

#include "zeno_otto/density.hpp"
#include "zeno_otto/model.hpp"
#include "zeno_otto/propagation.hpp"
#include "zeno_otto/rng.hpp"

#include <optional>
#include <vector>

namespace zeno_otto {

// X basis is the protocol default; the computational basis exists for the
// basis-competition experiment only.
enum class MeasurementBasis { X, Computational };

// First/second projector of the measurement basis: |+>/|-> or |0>/|1>.
enum class MeasOutcome : int { Plus = 0, Minus = 1 };

Mat lubricant_projector(MeasurementBasis basis, MeasOutcome outcome);  // on the joint space

struct MeasurementResult {
    MeasOutcome outcome;
    DensityOperator post_state;
    double prob;  // Born probability of the sampled outcome
};

// Selective lubricant measurement; u in [0,1) picks the outcome by the Born
// rule (never postselected). Throws InvariantViolation if both outcome
// probabilities are below 1e-15.
MeasurementResult measure_lubricant(const DensityOperator& rho_sl, MeasurementBasis basis, double u);

// rho -> sum_l P_l rho P_l on the lubricant.
Mat nonselective_channel(const Mat& rho_sl, MeasurementBasis basis);

struct TrajectoryRecord {
    std::vector<MeasOutcome> outcomes;       // length n
    std::vector<double> step_work;           // delta W_k across each pulse
    std::vector<double> step_meas_heat;      // delta Q_k^(meas), post minus pre
    double log_prob = 0.0;                   // ln p(l_1..l_n)
    int jump_count = 0;
    std::optional<DensityOperator> final_state;

    double total_work() const;
    double total_meas_heat() const;
};

// Pulse propagators under h_total for the n_meas subintervals of the stroke.
std::vector<Mat> zeno_pulse_propagators(const EngineParams& p, Stage s,
                                        const PropagationSettings& settings);

// One stochastic realization of the Zeno-driven stroke: n rounds of (unitary
// pulse under h_total, selective lubricant measurement). Checks the
// per-trajectory closure <H(t_f)>_f - <H(t_i)>_i = sum dW + sum dQ to 1e-8.
TrajectoryRecord run_zeno_stroke(const EngineParams& p, Stage s, const DensityOperator& rho_sl_in,
                                 MeasurementBasis basis, const TrajectoryStream& stream,
                                 std::uint64_t step_offset, const PropagationSettings& settings);

// Same, reusing precomputed pulse propagators (ensemble hot path).
TrajectoryRecord run_zeno_stroke_with(const EngineParams& p, Stage s, const std::vector<Mat>& pulses,
                                      const DensityOperator& rho_sl_in, MeasurementBasis basis,
                                      const TrajectoryStream& stream, std::uint64_t step_offset);

struct TrajectoryEnsemble {
    std::vector<TrajectoryRecord> records;
    double mean_work = 0.0;
    double mean_meas_heat = 0.0;
    double std_work = 0.0;  // sample standard deviation (N-1)
};

// Trajectory i draws from the stream (master_seed, i); statistics are
// independent of execution order, so any worker count gives identical output.
// step_offset separates the draw indices of different strokes of one protocol.
TrajectoryEnsemble run_ensemble(const EngineParams& p, Stage s, const DensityOperator& rho_sl_in,
                                MeasurementBasis basis, int n_traj, std::uint64_t master_seed,
                                const PropagationSettings& settings, int workers = 1,
                                std::uint64_t step_offset = 0);

// sigma(l_n) = ln(p(l_1)/p(l_n)). Throws on p(l_n) = 0.
double entropy_production(double p_first, double p_last_marginal);

// Exact marginal of the final outcome by iterating the nonselective channel.
double final_outcome_marginal(const EngineParams& p, Stage s, const DensityOperator& rho_sl_in,
                              MeasurementBasis basis, MeasOutcome target,
                              const PropagationSettings& settings);

// Exact-marginal entropy production for the standard protocol (lubricant
// prepared in the first basis state, p(l_1) = 1).
double zeno_entropy_production_exact(const EngineParams& p, Stage s,
                                     const DensityOperator& rho_sl_in, MeasurementBasis basis,
                                     const PropagationSettings& settings);

// Ensemble-frequency estimate of the same marginal, for cross-validation.
double zeno_entropy_production_sampled(const TrajectoryEnsemble& ensemble, MeasOutcome target);

}  // namespace zeno_otto
