#include <benchmark/benchmark.h>

#include "coinwalk/oracle.hpp"
#include "coinwalk/rng.hpp"
#include "coinwalk/teleport.hpp"
#include "coinwalk/transfer.hpp"

using namespace coinwalk;

namespace {

Vec fixed_qubit() { return {Complex{0.6, 0.0}, Complex{0.0, 0.8}}; }

void BM_LineTransfer(benchmark::State& state) {
    const TransferPlan plan = plan_line(state.range(0));
    const Vec input = fixed_qubit();
    for (auto _ : state) {
        auto report = run_transfer(plan, input);
        benchmark::DoNotOptimize(report.fidelity);
    }
}
BENCHMARK(BM_LineTransfer)->Arg(2)->Arg(4)->Arg(8);

void BM_CompleteTransfer(benchmark::State& state) {
    const std::int64_t d = state.range(0);
    const TransferPlan plan = plan_complete(d, d - 1);
    Rng rng(1);
    const Vec input = random_state_vector(d, rng);
    for (auto _ : state) {
        auto report = run_transfer(plan, input);
        benchmark::DoNotOptimize(report.fidelity);
    }
}
BENCHMARK(BM_CompleteTransfer)->Arg(4)->Arg(8)->Arg(16);

void BM_TeleportCompleteEnumerate(benchmark::State& state) {
    const std::int64_t d = state.range(0);
    Rng rng(2);
    const Vec input = random_state_vector(d, rng);
    for (auto _ : state) {
        auto branches = teleport_complete(d, 1, input);
        benchmark::DoNotOptimize(branches.size());
    }
}
BENCHMARK(BM_TeleportCompleteEnumerate)->Arg(3)->Arg(5)->Arg(7);

// Spreading walk with a Fourier (Hadamard) coin: support grows linearly and
// stresses the sparse map.
void BM_HadamardWalk(benchmark::State& state) {
    const auto steps = static_cast<int>(state.range(0));
    const GraphSpec arena = GraphSpec::line();
    const StepSpec step = make_step(arena, 0, CoinOp::fourier(2));
    for (auto _ : state) {
        WalkState s = make_state(arena, {2}, {{{0, {0}}, 1.0}});
        for (int i = 0; i < steps; ++i) s = apply_step(s, step);
        benchmark::DoNotOptimize(s.amps.size());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_HadamardWalk)->RangeMultiplier(2)->Range(16, 256)->Complexity();

void BM_CertifySchedule(benchmark::State& state) {
    const TransferPlan plan = plan_complete(6, 3);
    for (auto _ : state) {
        auto record = certify_schedule(plan, 2);
        benchmark::DoNotOptimize(record.pass);
    }
}
BENCHMARK(BM_CertifySchedule);

} // namespace

BENCHMARK_MAIN();
