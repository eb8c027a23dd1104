#include "zeno_otto/cycle.hpp"

#include <cmath>
#include <limits>

namespace zeno_otto {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct WorkStrokeResult {
    DensityOperator rho_s_end;
    double w_reduced = kNaN;
    double w_joint = kNaN;
    double decoupling = kNaN;
    double meas_heat = kNaN;
    double meas_energy_cost = kNaN;
    double sigma_exact = kNaN;
    double jumps = kNaN;
    double coherence_end = kNaN;
    double negativity_end = kNaN;
    double friction_coherent = kNaN;
    double friction_population = kNaN;
};

// Stepwise conjugation recording the reduced state on the substep grid.
struct PathRecorder {
    std::vector<double> times;
    std::vector<Mat> rho_s;
    void push(double t, const Mat& reduced) {
        times.push_back(t);
        rho_s.push_back(reduced);
    }
};

long substep_count(double tau, const PropagationSettings& settings) {
    return std::max<long>(1, std::lround(std::ceil(tau * settings.substeps_per_unit_time - 1e-9)));
}

// Unitary stroke on the given state, sampling the (reduced) path when asked.
Mat evolve_recording(const EngineParams& p, Stage s, const std::function<Mat(double)>& h,
                     const PropagationSettings& settings, Mat rho, PathRecorder* rec) {
    const double tau = stroke_duration(p, s);
    const long n = substep_count(tau, settings);
    const double dt = tau / static_cast<double>(n);
    const bool joint = rho.dim() == 4;
    if (rec) rec->push(0.0, joint ? partial_trace(rho, Subsystem::First) : rho);
    for (long k = 0; k < n; ++k) {
        const Mat u = hermitian_exponential(h((static_cast<double>(k) + 0.5) * dt), dt);
        rho = u * rho * u.dagger();
        if (rec) rec->push(static_cast<double>(k + 1) * dt,
                           joint ? partial_trace(rho, Subsystem::First) : rho);
    }
    return rho;
}

WorkStrokeResult run_work_stroke(const EngineParams& p, Stage s, const DensityOperator& rho_s_in,
                                 const CycleOptions& options, const PropagationSettings& settings,
                                 int cycle_index) {
    const double tau = stroke_duration(p, s);
    const Mat h_i = h_stroke(p, s, 0.0);
    const Mat h_f = h_stroke(p, s, tau);
    PathRecorder recorder;
    PathRecorder* rec = options.record_friction && options.mode != DriveMode::ZenoMonitored
                            ? &recorder
                            : nullptr;

    WorkStrokeResult out{rho_s_in};
    if (options.mode == DriveMode::Bare) {
        const Mat rho_f = evolve_recording(p, s, [&](double t) { return h_stroke(p, s, t); },
                                           settings, rho_s_in.matrix(), rec);
        out.rho_s_end = DensityOperator(rho_f);
    } else if (options.mode == DriveMode::StrongCoupling ||
               options.mode == DriveMode::CounterDiabatic) {
        const PropagationSettings refined = settings.refined_for_coupling(coupling_strength(p, s));
        const Mat rho_l = lubricant_initial_state(p);
        const Mat rho_sl_in = tensor_product(rho_s_in.matrix(), rho_l);
        const auto h = [&](double t) {
            return options.mode == DriveMode::StrongCoupling ? h_total(p, s, t)
                                                             : h_effective(p, s, t);
        };
        const DensityOperator rho_sl_f(evolve_recording(p, s, h, refined, rho_sl_in, rec));
        out.rho_s_end = DensityOperator(partial_trace(rho_sl_f.matrix(), Subsystem::First));
        out.w_joint = expectation(h_total(p, s, tau), rho_sl_f.matrix()) -
                      expectation(h_total(p, s, 0.0), rho_sl_in);
        out.decoupling = decoupling_cost(p, s, rho_sl_f, rho_s_in.matrix(), rho_l);
        out.negativity_end = log_negativity(rho_sl_f);
    } else {  // ZenoMonitored
        const DensityOperator rho_sl_in(
            tensor_product(rho_s_in.matrix(), lubricant_initial_state(p)));
        const std::vector<Mat> pulses = zeno_pulse_propagators(p, s, settings);
        const TrajectoryStream stream{p.master_seed, options.trajectory_index};
        const std::uint64_t offset =
            2ull * static_cast<std::uint64_t>(p.n_meas) * static_cast<std::uint64_t>(cycle_index) +
            (s == Stage::Expansion ? static_cast<std::uint64_t>(p.n_meas) : 0ull);
        const TrajectoryRecord record =
            run_zeno_stroke_with(p, s, pulses, rho_sl_in, options.basis, stream, offset);
        out.rho_s_end = DensityOperator(partial_trace(record.final_state->matrix(), Subsystem::First));
        out.w_joint = record.total_work();
        out.meas_heat = record.total_meas_heat();
        out.jumps = static_cast<double>(record.jump_count);
        out.decoupling = decoupling_cost(p, s, *record.final_state, rho_s_in.matrix(),
                                         lubricant_initial_state(p));
        out.negativity_end = log_negativity(*record.final_state);

        // Deterministic (nonselective) audits over the same pulse sequence:
        // measurement cost totals and the exact final-outcome marginal.
        const double dt = tau / p.n_meas;
        Mat rho = rho_sl_in.matrix();
        double heat_cost = 0.0, reset_cost = 0.0, p_last = 1.0;
        for (int k = 0; k < p.n_meas; ++k) {
            const Mat& u = pulses[static_cast<size_t>(k)];
            rho = u * rho * u.dagger();
            const MeasurementCost c = measurement_energy_cost(
                DensityOperator(rho), h_total(p, s, (k + 1) * dt), options.basis, p.beta_reset);
            heat_cost += c.heat_part;
            reset_cost += c.reset_part;
            if (k == p.n_meas - 1) {
                p_last = expectation(lubricant_projector(options.basis, MeasOutcome::Plus), rho);
            }
            rho = nonselective_channel(rho, options.basis);
        }
        out.meas_energy_cost = heat_cost + (options.include_reset_cost ? reset_cost : 0.0);
        const double p_first = expectation(lubricant_projector(options.basis, MeasOutcome::Plus),
                                           rho_sl_in.matrix());
        out.sigma_exact = entropy_production(p_first, p_last);
    }

    out.w_reduced = stroke_work(h_i, h_f, rho_s_in, out.rho_s_end);
    out.coherence_end = coherence_l1(out.rho_s_end, h_f);
    if (rec) {
        const FrictionSplit split = friction_work(p, s, recorder.times, recorder.rho_s);
        out.friction_coherent = split.coherent_part;
        out.friction_population = split.population_part;
    }
    return out;
}

}  // namespace

CycleResult run_cycle(const EngineParams& p, const CycleOptions& options,
                      const PropagationSettings& settings,
                      const std::optional<DensityOperator>& rho_start, int cycle_index) {
    p.validate();
    settings.validate();

    const DensityOperator rho0 = rho_start ? *rho_start : thermal_state(h_cold(p), p.t_c);

    const WorkStrokeResult comp =
        run_work_stroke(p, Stage::Compression, rho0, options, settings, cycle_index);

    const DensityOperator rho_t2 =
        propagate_lindblad(p, Bath::Hot, comp.rho_s_end, p.tau_hot, settings);
    const double q_hot = expectation(h_hot(p), rho_t2.matrix() - comp.rho_s_end.matrix());

    const WorkStrokeResult expn =
        run_work_stroke(p, Stage::Expansion, rho_t2, options, settings, cycle_index);

    const DensityOperator rho_t4 =
        propagate_lindblad(p, Bath::Cold, expn.rho_s_end, p.tau_cold, settings);
    const double q_cold = expectation(h_cold(p), rho_t4.matrix() - expn.rho_s_end.matrix());

    const IdealOtto ideal = ideal_otto(p);
    CycleLedger led{};
    led.w_comp = comp.w_reduced;
    led.w_exp = expn.w_reduced;
    led.w_tot = led.w_comp + led.w_exp;
    led.q_hot = q_hot;
    led.q_cold = q_cold;
    led.q_tot = q_hot + q_cold;
    led.delta_u = expectation(h_cold(p), rho_t4.matrix() - rho0.matrix());
    led.power = -led.w_tot / p.cycle_time();
    led.efficiency = std::abs(q_hot) > 1e-300 ? -led.w_tot / q_hot : kNaN;
    led.eta_otto = ideal.eta_otto;
    led.eta_carnot = ideal.eta_carnot;
    led.friction_comp = comp.friction_coherent;
    led.friction_exp = expn.friction_coherent;
    led.friction_pop_comp = comp.friction_population;
    led.friction_pop_exp = expn.friction_population;
    led.w_joint_sc = comp.w_joint + expn.w_joint;  // NaN propagates for bare mode
    led.decoupling_cost_comp = comp.decoupling;
    led.decoupling_cost_exp = expn.decoupling;
    led.decoupling_cost_total = comp.decoupling + expn.decoupling;
    led.meas_heat = comp.meas_heat + expn.meas_heat;
    led.meas_energy_cost = comp.meas_energy_cost + expn.meas_energy_cost;
    led.entropy_production = comp.sigma_exact + expn.sigma_exact;
    led.jump_count = comp.jumps + expn.jumps;
    led.drive_cost_per_cycle =
        options.mode == DriveMode::Bare
            ? 0.0
            : drive_cost(p, Stage::Compression, options.drive_norm) +
                  drive_cost(p, Stage::Expansion, options.drive_norm);
    led.net_power = options.mode == DriveMode::Bare
                        ? led.power
                        : net_power(p, led.power, p.nu, options.drive_norm);
    led.tau_therm_hot = thermalization_time(p, Bath::Hot).tau_estimate;
    led.tau_therm_cold = thermalization_time(p, Bath::Cold).tau_estimate;
    led.coherence_comp_end = comp.coherence_end;
    led.coherence_exp_end = expn.coherence_end;
    led.log_negativity_comp_end = comp.negativity_end;
    led.first_law_residual = std::abs(led.w_tot + led.q_tot - led.delta_u);
    if (led.first_law_residual > 1e-8) {
        throw InvariantViolation("first-law residual " + std::to_string(led.first_law_residual));
    }
    return {led, rho0, rho_t4};
}

std::vector<CycleResult> run_cycles(const EngineParams& p, const CycleOptions& options,
                                    const PropagationSettings& settings) {
    std::vector<CycleResult> out;
    out.reserve(static_cast<size_t>(options.n_cycles));
    std::optional<DensityOperator> state;
    for (int c = 0; c < options.n_cycles; ++c) {
        out.push_back(run_cycle(p, options, settings, state, c));
        state = out.back().rho_end;
    }
    return out;
}

}  // namespace zeno_otto
