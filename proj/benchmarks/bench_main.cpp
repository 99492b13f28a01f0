#include <tvaraug/tvaraug.hpp>

#include <benchmark/benchmark.h>

#include <random>

using namespace tvaraug;

namespace {

Dataset source(std::size_t units, std::size_t len, std::size_t m_ch) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    Dataset ds;
    for (std::size_t m = 0; m < m_ch; ++m) ds.channel_names.push_back("s" + std::to_string(m));
    for (std::size_t j = 0; j < units; ++j) {
        Matrix u(len, m_ch);
        for (std::size_t n = 0; n < len; ++n) {
            for (std::size_t m = 0; m < m_ch; ++m) u(n, m) = 10.0 + 0.01 * double(n) + g(rng);
        }
        ds.units.push_back(std::move(u));
        ds.unit_ids.push_back("u" + std::to_string(j));
    }
    return ds;
}

void BM_GenerateClosed(benchmark::State& state) {
    const auto len = static_cast<std::size_t>(state.range(0));
    const TvarModel model = fit(source(5, len, 14), ModelConfig{});
    const ClosedFormGenerator gen(model);
    Matrix out;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        gen.generate_into(seed++, out);
        benchmark::DoNotOptimize(out.data().data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(len * 14));
}
BENCHMARK(BM_GenerateClosed)->Arg(50)->Arg(200)->Arg(1000);

void BM_Augment(benchmark::State& state) {
    const TvarModel model = fit(source(5, 200, 14), ModelConfig{});
    const auto count = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        auto batch = augment(model, count, 7, static_cast<unsigned>(state.range(1)));
        benchmark::DoNotOptimize(batch.series.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Augment)->Args({1000, 1})->Args({1000, 0})->Unit(benchmark::kMillisecond);

void BM_SimulateMoments(benchmark::State& state) {
    const TvarModel model = fit(source(5, 200, 14), ModelConfig{});
    for (auto _ : state) {
        auto sim = simulate_moments(model, static_cast<std::size_t>(state.range(0)), 3);
        benchmark::DoNotOptimize(sim.max_abs_corr);
    }
}
BENCHMARK(BM_SimulateMoments)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_FitSinusoid(benchmark::State& state) {
    const auto len = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g;
    std::vector<double> curve(len);
    for (double& v : curve) v = g(rng);
    for (auto _ : state) {
        auto fn = fit_sinusoid(curve, len / 4 + 1);
        benchmark::DoNotOptimize(fn);
    }
}
BENCHMARK(BM_FitSinusoid)->Arg(64)->Arg(256)->Arg(1024);

void BM_EnsembleStats(benchmark::State& state) {
    const Dataset ds = source(static_cast<std::size_t>(state.range(0)), 200, 14);
    const bool full = state.range(1) != 0;
    for (auto _ : state) {
        auto st = ensemble_stats(ds, full);
        benchmark::DoNotOptimize(st.mean.data().data());
    }
}
BENCHMARK(BM_EnsembleStats)->Args({5, 0})->Args({100, 0})->Args({100, 1});

void BM_Fit(benchmark::State& state) {
    const Dataset ds = source(5, 200, 14);
    ModelConfig cfg;
    cfg.interp_mode = state.range(0) ? InterpMode::Sinusoid : InterpMode::Direct;
    cfg.order = 20;
    for (auto _ : state) {
        auto model = fit(ds, cfg);
        benchmark::DoNotOptimize(model.fingerprint().data());
    }
}
BENCHMARK(BM_Fit)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
