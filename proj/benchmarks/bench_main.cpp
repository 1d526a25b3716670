#include <benchmark/benchmark.h>

#include "ybforge/classical.hpp"

using namespace ybforge;
using freealg::Algebra;

namespace {

void BM_SolveStandardRank1(benchmark::State& state) {
    auto alg = Algebra::create(cartan::sl2_spec());
    for (auto _ : state) benchmark::DoNotOptimize(rmatrix::solve_standard(alg, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_SolveStandardRank1)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_SolveStandardGenericRank2(benchmark::State& state) {
    auto alg = Algebra::create(cartan::generic_spec(2));
    for (auto _ : state) benchmark::DoNotOptimize(rmatrix::solve_standard(alg, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_SolveStandardGenericRank2)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_YbeResidual(benchmark::State& state) {
    auto R = rmatrix::solve_standard(Algebra::create(cartan::generic_spec(2)), 3);
    for (auto _ : state) benchmark::DoNotOptimize(rmatrix::ybe_residual(R, 3));
}
BENCHMARK(BM_YbeResidual)->Unit(benchmark::kMillisecond);

void BM_RepSolve(benchmark::State& state) {
    auto V = reps::fundamental_slN(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(reps::solve_R_in_rep(V, V));
}
BENCHMARK(BM_RepSolve)->DenseRange(2, 3)->Unit(benchmark::kMillisecond);

void BM_CybeUntwisted(benchmark::State& state) {
    auto r = classical::r_standard_untwisted(classical::traceless_slN_basis(static_cast<int>(state.range(0))),
                                             classical::spectral_ratio("lambda", "mu"));
    for (auto _ : state) benchmark::DoNotOptimize(classical::cybe_residual(r, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_CybeUntwisted)->DenseRange(2, 3)->Unit(benchmark::kMillisecond);

void BM_VerifyExtension(benchmark::State& state) {
    auto spec = classical::untwisted_loop_spec(classical::slN_basis(2));
    for (auto _ : state)
        benchmark::DoNotOptimize(
            classical::verify_extension(classical::loop_expand(spec, static_cast<int>(state.range(0))), scalars::Scalar(mpq_class(1, 2))));
}
BENCHMARK(BM_VerifyExtension)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_EllipticProduct(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(classical::elliptic_R_product(0.3, 1.7, 0.23, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_EllipticProduct)->RangeMultiplier(2)->Range(5, 80);

void BM_JacobiElliptic(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(classical::jacobi_elliptic({0.41, 0.2}, {0.6, 0.1}));
}
BENCHMARK(BM_JacobiElliptic);

void BM_FitElliptic(benchmark::State& state) {
    std::vector<double> check = {0.05, 0.13, 0.19, 0.26, 0.34, 0.41, 0.47, 0.55};
    for (auto _ : state)
        benchmark::DoNotOptimize(classical::fit_elliptic(0.3, 1.7, 40, {0.1, 0.3}, check, classical::Form::Derived, 1));
}
BENCHMARK(BM_FitElliptic)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
