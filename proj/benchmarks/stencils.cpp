#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "riemdiff/expr.hpp"
#include "riemdiff/metric.hpp"
#include "riemdiff/model.hpp"
#include "riemdiff/operators.hpp"
#include "riemdiff/solver.hpp"

using namespace riemdiff;

namespace {

MetricField warped(int n) {
  const ChartGrid grid(2, n);
  return build_metric(metric_catalog("warped2d", 2), grid);
}

template <FieldKind K>
Field<K> wavy(const ChartGrid& grid) {
  Field<K> f(grid);
  for (std::size_t node = 0; node < grid.size(); ++node) {
    for (int c = 0; c < f.components(); ++c) {
      f(node, c) = std::sin(2.0 * std::numbers::pi * (grid.x(node, 0) + (c + 1) * grid.x(node, 1)));
    }
  }
  return f;
}

void BM_div_vector(benchmark::State& state) {
  const MetricField metric = warped(static_cast<int>(state.range(0)));
  const VectorField x = wavy<FieldKind::vector>(metric.grid());
  for (auto _ : state) benchmark::DoNotOptimize(div_vector(x, metric));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(metric.grid().size()));
}

void BM_divdiv(benchmark::State& state) {
  const MetricField metric = warped(static_cast<int>(state.range(0)));
  const Tensor11Field t = wavy<FieldKind::tensor11>(metric.grid());
  for (auto _ : state) benchmark::DoNotOptimize(divdiv_tensor11(t, metric));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(metric.grid().size()));
}

void BM_laplace(benchmark::State& state) {
  const MetricField metric = warped(static_cast<int>(state.range(0)));
  const ScalarField v = wavy<FieldKind::scalar>(metric.grid());
  for (auto _ : state) benchmark::DoNotOptimize(laplace_beltrami(v, metric));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(metric.grid().size()));
}

void BM_rhs(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ChartGrid grid(2, n);
  const XiGrid xi(64);
  const MetricField metric = warped(n);
  TensorExprs sigma;
  sigma[0][0] = Expr::parse("0.25*(1 + xi)");
  sigma[0][1] = Expr::parse("0");
  sigma[1][0] = Expr::parse("0");
  sigma[1][1] = Expr::parse("0.25*(1 + xi*xi)");
  const DiffusionModel dm = DiffusionModel::from_expressions(sigma, metric, xi);
  const FluxModel fm = make_compatible_flux(dm, metric, nullptr);
  const Problem p{metric, fm, dm};
  const ScalarField u = sample_expression(Expr::parse("0.5 + 0.3*sin(2*pi*x1)*cos(2*pi*x2)"), grid);
  for (auto _ : state) benchmark::DoNotOptimize(rhs(u, p, 1e-2));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}

}  // namespace

BENCHMARK(BM_div_vector)->Arg(64)->Arg(256);
BENCHMARK(BM_divdiv)->Arg(64)->Arg(256);
BENCHMARK(BM_laplace)->Arg(64)->Arg(256);
BENCHMARK(BM_rhs)->Arg(64)->Arg(128);
BENCHMARK_MAIN();
