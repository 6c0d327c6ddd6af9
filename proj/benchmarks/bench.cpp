#include <benchmark/benchmark.h>

#include "diracsf/dirac_direct.hpp"
#include "diracsf/herglotz.hpp"
#include "diracsf/inverse.hpp"
#include "diracsf/snode.hpp"
#include "diracsf/spectral_measure.hpp"

namespace {

using namespace diracsf;

void bm_fundamental_solution(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Potential pot = constant_potential(0.5, 1.0, n);
  const Complex z(1.0, 0.5);
  for (auto _ : state) {
    auto u = fundamental_solution(pot, z);
    benchmark::DoNotOptimize(u.back());
  }
  state.SetComplexityN(n);
}
BENCHMARK(bm_fundamental_solution)->Range(128, 2048)->Complexity();

void bm_assemble_and_factorize(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SpectralMeasure m = free_measure(1, 50.0, 2001);
  const SNode node = build_snode(m, 1.0, n);
  for (auto _ : state) {
    const Matrix s = assemble_s_operator(node);
    const LowerFactor f = factorize_s_operator(node, s);
    benchmark::DoNotOptimize(f.lower()(0, 0));
  }
  state.SetComplexityN(n);
}
BENCHMARK(bm_assemble_and_factorize)->Range(64, 512)->Complexity();

void bm_inverse_pipeline(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SpectralMeasure m = free_measure(1, 50.0, 2001);
  InverseOptions opt;
  opt.n = n;
  opt.force = true;
  for (auto _ : state) {
    const InverseResult r = solve_inverse(m, 1.0, opt);
    benchmark::DoNotOptimize(r.potential.sup_norm());
  }
  state.SetComplexityN(n);
}
BENCHMARK(bm_inverse_pipeline)->Range(64, 256)->Complexity();

void bm_boundary_density_probe(benchmark::State& state) {
  const Potential pot = constant_potential(0.5, 1.0, 256);
  const Matrix direction = default_weyl_direction(1);
  double t = -40.0;
  for (auto _ : state) {
    const Matrix phi = weyl_function(pot, Complex(t, 1e-3), direction);
    benchmark::DoNotOptimize(phi(0, 0));
    t += 0.1;
    if (t > 40.0) t = -40.0;
  }
}
BENCHMARK(bm_boundary_density_probe);

}  // namespace

BENCHMARK_MAIN();
