#include <benchmark/benchmark.h>

#include "qkd3/bell.hpp"
#include "qkd3/protocol.hpp"

namespace {

using namespace qkd3;

void BM_Observable(benchmark::State& state) {
    const MeasurementSetting s{PhaseTriple::powers(zeta_pow(2)), DetectorKind::StandardZ, "A2"};
    for (auto _ : state) benchmark::DoNotOptimize(observable(s));
}
BENCHMARK(BM_Observable);

void BM_MeasurementContext(benchmark::State& state) {
    const MeasurementSetting s{PhaseTriple::powers(zeta_pow(1)), DetectorKind::ConjugateZ, "B1"};
    for (auto _ : state) benchmark::DoNotOptimize(measurement_context(s));
}
BENCHMARK(BM_MeasurementContext);

void BM_CorrelatorExact(benchmark::State& state) {
    const TwoQutritDensity rho = mix_noise(ghz(), 0.2);
    const BellConfiguration cfg = chsh3_optimal_configuration();
    for (auto _ : state)
        benchmark::DoNotOptimize(
            correlator_exact(rho, cfg.alice_settings[0], cfg.bob_settings[1]));
}
BENCHMARK(BM_CorrelatorExact);

void BM_EvaluateHchsh3(benchmark::State& state) {
    const TwoQutritDensity rho = mix_noise(ghz(), 0.1);
    const BellConfiguration cfg = hchsh3_optimal_configuration();
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_hchsh3(rho, cfg));
}
BENCHMARK(BM_EvaluateHchsh3);

void BM_MeasureRound(benchmark::State& state) {
    const TwoQutritDensity rho = mix_noise(ghz(), 0.1);
    const MeasurementSetting a = setting_h3deb(Party::Alice, "02");
    const MeasurementSetting b = setting_h3deb(Party::Bob, "13");
    Rng rng(42);
    for (auto _ : state) benchmark::DoNotOptimize(measure_round(rho, a, b, rng));
}
BENCHMARK(BM_MeasureRound);

void BM_ProtocolRounds(benchmark::State& state) {
    ProtocolConfig cfg;
    cfg.variant = ProtocolVariant::HThreeDEB;
    cfg.noise_fraction = 0.1;
    cfg.target_key_length = 0;
    cfg.min_check_rounds = static_cast<std::size_t>(state.range(0));
    cfg.rng_seed = 7;
    for (auto _ : state) {
        const ProtocolOutcome out = run_protocol(cfg);
        benchmark::DoNotOptimize(out.rounds.size());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * 4);
}
BENCHMARK(BM_ProtocolRounds)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
