#include "minigal/coeff.hpp"
#include "minigal/scenario.hpp"

#include <benchmark/benchmark.h>

using namespace minigal;

namespace {

void BM_gf_mul_mixed_degree(benchmark::State& state)
{
    // F_25 times F_125 lands in F_{5^6}
    GFElem a = GFElem::generator(5, 2), b = GFElem::generator(5, 3);
    GFElem acc(5, 1);
    for (auto _ : state) {
        acc = acc * a + b;
        benchmark::DoNotOptimize(acc);
    }
}
BENCHMARK(BM_gf_mul_mixed_degree);

void BM_curve_order(benchmark::State& state)
{
    auto const f = parse_poly(5, "u - t^2 - 1");
    auto const x = parse_rat(5, "(u - t^2 - 1)^3*(t + 2)/((u - t^2 - 1)*(u + 3))");
    for (auto _ : state) benchmark::DoNotOptimize(curve_order(f, x));
}
BENCHMARK(BM_curve_order);

void BM_element_stream(benchmark::State& state)
{
    Budget b = Budget::standard({5, 2});
    b.max_constants = static_cast<std::uint32_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(enum_test_elements(b).size());
}
BENCHMARK(BM_element_stream)->Arg(4)->Arg(24);

void BM_cpair_matrix_u0(benchmark::State& state)
{
    auto const s = parse_scenario(curated_declarations("u0"));
    for (auto _ : state) {
        auto ws = build_workspace(s);
        CPairEngine engine(*ws.registry, ws.budget, static_cast<unsigned>(state.range(0)));
        ModelChecker mc(ws.universe("U0"), engine);
        mc.precompute();
        benchmark::DoNotOptimize(engine.cache_size());
    }
}
BENCHMARK(BM_cpair_matrix_u0)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_visible_inertia_u0(benchmark::State& state)
{
    auto ws = build_workspace(parse_scenario(curated_declarations("u0")));
    CPairEngine engine(*ws.registry, ws.budget);
    ModelChecker mc(ws.universe("U0"), engine);
    mc.precompute();
    for (auto _ : state)
        for (std::size_t i = 0; i < mc.universe().lower.size(); ++i)
            benchmark::DoNotOptimize(mc.visible_inertia(i).value);
}
BENCHMARK(BM_visible_inertia_u0);

void BM_cancellation_sweep(benchmark::State& state)
{
    for (auto _ : state) benchmark::DoNotOptimize(sweep_cancellation(3, 2, 2).counterexamples);
}
BENCHMARK(BM_cancellation_sweep)->Unit(benchmark::kMillisecond);

void BM_module_rank(benchmark::State& state)
{
    auto ws = build_workspace(parse_scenario(curated_declarations("u1")));
    auto const& S = ws.universe("U1").lower;
    for (auto _ : state) benchmark::DoNotOptimize(module_rank(S));
}
BENCHMARK(BM_module_rank);

}  // namespace
BENCHMARK_MAIN();
