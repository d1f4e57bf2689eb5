#include <benchmark/benchmark.h>

#include "ocad/constructors.hpp"
#include "ocad/dg_solver.hpp"
#include "ocad/optimizer.hpp"
#include "ocad/quadrature.hpp"

static void BM_GaussLobatto(benchmark::State& state) {
    const int L = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(ocad::gauss_lobatto(L));
}
BENCHMARK(BM_GaussLobatto)->Arg(4)->Arg(8)->Arg(16);

static void BM_PhiStar(benchmark::State& state) {
    const ocad::SpaceId space{ocad::Family::P, static_cast<int>(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(ocad::phi_star_sq(space, -0.3).value);
}
BENCHMARK(BM_PhiStar)->Arg(4)->Arg(8)->Arg(12);

static void BM_ClosedFormOCAD(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(ocad::ocad_pk(k, -0.37));
}
BENCHMARK(BM_ClosedFormOCAD)->Arg(2)->Arg(4)->Arg(6);

static void BM_Verify(benchmark::State& state) {
    const auto cad = ocad::ocad_pk(6, -0.37);
    for (auto _ : state) benchmark::DoNotOptimize(ocad::verify_feasibility(cad).max_residual);
}
BENCHMARK(BM_Verify);

static void BM_ContinuationP8(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(ocad::continuation_driver(8, 0.0).cad.boundary_weight);
}
BENCHMARK(BM_ContinuationP8)->Unit(benchmark::kMillisecond);

static void BM_LowerBoundLP(benchmark::State& state) {
    const int grid = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(ocad::lower_bound_lp({ocad::Family::P, 4}, 0.0, grid).value);
}
BENCHMARK(BM_LowerBoundLP)->Arg(21)->Arg(41)->Unit(benchmark::kMillisecond);

static void BM_DGStep(benchmark::State& state) {
    using namespace ocad::dg;
    const int k = static_cast<int>(state.range(0));
    const ProblemSpec pb = burgers_problem();
    const Basis basis(k);
    const Mesh2D mesh(40, 40, -1, 1, -1, 1);
    DGField u = l2_project(pb.initial, mesh, k, 1);
    const LimiterCAD lc = make_limiter_cad(ocad::ocad_pk(k, 0.0));
    const StepControl ctl;
    for (auto _ : state) {
        ssp_rk3_step(u, pb, basis, lc, 1e-4, ctl);
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * mesh.cells());
}
BENCHMARK(BM_DGStep)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
