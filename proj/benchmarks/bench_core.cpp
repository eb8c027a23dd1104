#include "zeno_otto/cycle.hpp"
#include "zeno_otto/monte_carlo.hpp"
#include "zeno_otto/propagation.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace zeno_otto;

EngineParams bench_params() {
    EngineParams p;
    p.omega = 1.0;
    p.omega_l = 1.0;
    p.omega0 = 3.01105;
    p.t_c = 0.5;
    p.t_h = 3.0;
    p.tau_comp = 5.0;
    p.tau_exp = 2.5;
    p.gamma_comp = p.gamma_exp = 20.0;
    return p;
}

void BM_HermitianExponential4x4(benchmark::State& state) {
    const EngineParams p = bench_params();
    const Mat h = h_total(p, Stage::Compression, 1.3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hermitian_exponential(h, 0.005));
    }
}
BENCHMARK(BM_HermitianExponential4x4);

// Substep count scales with the coupling through refined_for_coupling.
void BM_CompressionPropagator(benchmark::State& state) {
    EngineParams p = bench_params();
    p.gamma_comp = p.gamma_exp = static_cast<double>(state.range(0));
    const PropagationSettings settings;
    for (auto _ : state) {
        benchmark::DoNotOptimize(work_stroke_unitary(p, Stage::Compression, WorkGenerator::Total,
                                                     0.0, p.tau_comp, settings));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CompressionPropagator)->Arg(5)->Arg(20)->Arg(60)->Complexity();

void BM_LindbladStroke(benchmark::State& state) {
    const EngineParams p = bench_params();
    const PropagationSettings settings;
    const DensityOperator rho = thermal_state(h_cold(p), p.t_c);
    for (auto _ : state) {
        benchmark::DoNotOptimize(propagate_lindblad(p, Bath::Hot, rho, 5.0, settings));
    }
}
BENCHMARK(BM_LindbladStroke);

void BM_ZenoTrajectory(benchmark::State& state) {
    EngineParams p = bench_params();
    p.n_meas = static_cast<int>(state.range(0));
    const PropagationSettings settings;
    const DensityOperator in(
        tensor_product(thermal_state(h_cold(p), p.t_c).matrix(), ket_plus_projector()));
    const std::vector<Mat> pulses = zeno_pulse_propagators(p, Stage::Compression, settings);
    std::uint64_t traj = 0;
    for (auto _ : state) {
        const TrajectoryStream stream{7, traj++};
        benchmark::DoNotOptimize(
            run_zeno_stroke_with(p, Stage::Compression, pulses, in, MeasurementBasis::X, stream, 0));
    }
}
BENCHMARK(BM_ZenoTrajectory)->Arg(100)->Arg(400);

void BM_BareCycle(benchmark::State& state) {
    const EngineParams p = bench_params();
    const PropagationSettings settings;
    CycleOptions options;
    options.record_friction = false;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_cycle(p, options, settings));
    }
}
BENCHMARK(BM_BareCycle);

}  // namespace

BENCHMARK_MAIN();
