#include "sxr/axioms.hpp"
#include "sxr/demand.hpp"
#include "sxr/preference.hpp"

#include <benchmark/benchmark.h>

using namespace sxr;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

void BM_IndifferenceCross2(benchmark::State& state) {
  Field cobb = Field::cobb_douglas(v2(0.5, 0.5));
  Bundle x{v2(4, 1)}, v{v2(1, 1)};
  for (auto _ : state) {
    IndifferenceResult res = indifference_cross(cobb, x, v);
    benchmark::DoNotOptimize(res.u_value);
  }
}
BENCHMARK(BM_IndifferenceCross2);

void BM_IndifferenceCross3(benchmark::State& state) {
  Field n3 = Field::nonintegrable3();
  Vec xv(3), vv(3);
  xv << 0.6, 1.8, 0.7;
  vv << 1.0, 1.0, 1.0;
  Bundle x{xv}, v{vv};
  for (auto _ : state) {
    IndifferenceResult res = indifference_cross(n3, x, v);
    benchmark::DoNotOptimize(res.u_value);
  }
}
BENCHMARK(BM_IndifferenceCross3);

void BM_Holonomy(benchmark::State& state) {
  Field n3 = Field::nonintegrable3();
  Vec a(3), b(3), c(3);
  a << 0.6, 1.8, 0.7;
  b << 1.9, 0.6, 1.2;
  c << 0.8, 1.1, 1.9;
  for (auto _ : state) {
    double h = holonomy(n3, Bundle(a), Bundle(b), Bundle(c));
    benchmark::DoNotOptimize(h);
  }
}
BENCHMARK(BM_Holonomy);

void BM_SolveDemand(benchmark::State& state) {
  Field cobb = Field::cobb_douglas(v2(0.5, 0.5));
  BudgetProblem pr(v2(2, 1), 4.0);
  for (auto _ : state) {
    DemandResult res = solve_demand(cobb, pr, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(res.x_star);
  }
}
BENCHMARK(BM_SolveDemand)->Arg(4)->Arg(16);

void BM_Antonelli(benchmark::State& state) {
  Field n3 = Field::nonintegrable3();
  Vec xv(3);
  xv << 1.1, 0.9, 1.4;
  Bundle x{xv};
  for (auto _ : state) {
    AntonelliReport rep = antonelli(n3, x);
    benchmark::DoNotOptimize(rep.symmetry_residual);
  }
}
BENCHMARK(BM_Antonelli);

}  // namespace

BENCHMARK_MAIN();
