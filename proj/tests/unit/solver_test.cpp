#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>

#include "oracles.hpp"
#include "riemdiff/error.hpp"
#include "riemdiff/operators.hpp"
#include "riemdiff/solver.hpp"
#include "scenarios.hpp"

using namespace riemdiff;

namespace {

struct Flat1D {
  ChartGrid grid{1, 64};
  XiGrid xi{32};
  MetricField metric = build_metric(metric_catalog("euclidean", 1), grid);
  DiffusionModel dm = DiffusionModel::zero(metric, xi);
  FluxModel fm = FluxModel::zero(grid, xi);
  Problem problem() const { return {metric, fm, dm}; }
};

}  // namespace

TEST_CASE("solver config validation") {
  SolverConfig c;
  CHECK_NOTHROW(c.validate());
  c.eta = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = SolverConfig{};
  c.cfl = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = SolverConfig{};
  c.t_end = -1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("stable time step") {
  const Flat1D s;
  SolverConfig c;
  c.eta = 1.0;
  c.cfl = 0.4;
  CHECK(stable_dt(c, s.problem()) == doctest::Approx(4.8828125e-5).epsilon(1e-14));
  const double dt1 = stable_dt(c, s.problem());
  c.eta = 2.0;
  CHECK(stable_dt(c, s.problem()) == doctest::Approx(0.5 * dt1).epsilon(1e-14));

  // pure transport with |f'| = 1: both branches by hand
  const FluxModel burgers =
      FluxModel::from_expressions({Expr::parse("xi"), Expr::parse("0")}, std::nullopt, s.grid, s.xi);
  const Problem p{s.metric, burgers, s.dm};
  const double h = 1.0 / 64;
  for (double eta : {1e-4, 1e-3, 1e-2}) {
    c.eta = eta;
    const double convective = 0.4 * h / 1.0;
    const double diffusive = 0.4 * h * h / (2.0 * eta);
    CHECK(stable_dt(c, p) == doctest::Approx(std::min(convective, diffusive)).epsilon(1e-12));
  }
}

TEST_CASE("rhs reduces to the viscous Laplacian without coefficients") {
  const Flat1D s;
  ScalarField u(s.grid);
  for (std::size_t node = 0; node < u.size(); ++node) u(node) = 0.5 + 0.3 * std::sin(2 * std::numbers::pi * s.grid.x(node, 0));
  const ScalarField r = rhs(u, s.problem(), 0.05);
  const double inv_h2 = 64.0 * 64.0;
  for (std::size_t node = 0; node < u.size(); ++node) {
    const double lap = (u(s.grid.shift(node, 0, 1)) - 2 * u(node) + u(s.grid.shift(node, 0, -1))) * inv_h2;
    CHECK(r(node) == doctest::Approx(0.05 * lap).epsilon(1e-12));
  }
}

TEST_CASE("porous medium rhs matches the hand-coded stencil") {
  auto sc = fixtures::build(fixtures::porous());
  std::vector<double> u(sc->grid.size());
  for (std::size_t node = 0; node < u.size(); ++node) {
    const double x = sc->grid.x(node, 0);
    u[node] = 0.5 + 0.3 * std::sin(2 * std::numbers::pi * x) + 0.1 * std::cos(6 * std::numbers::pi * x);
  }
  ScalarField uf(sc->grid);
  uf.values() = u;
  const ScalarField r = rhs(uf, sc->problem(), sc->cfg.eta);
  const std::vector<double> ref = oracle::porous_rhs(u, sc->cfg.eta);
  double e = 0.0;
  for (std::size_t node = 0; node < u.size(); ++node) e = std::max(e, std::abs(r(node) - ref[node]));
  CHECK(e <= 1e-10);
}

TEST_CASE("constant state with a compatible pair") {
  fixtures::Spec spec = fixtures::curved1d();
  spec.u0 = "0.5";
  auto sc = fixtures::build(spec);
  const double h = sc->grid.h();
  CHECK(max_abs(rhs(sc->u0, sc->problem(), sc->cfg.eta).values()) <= 50.0 * h * h);
  const Trajectory tr = sc->run();
  double dev = 0.0;
  for (double v : tr.final().values()) dev = std::max(dev, std::abs(v - 0.5));
  CHECK(dev <= h * h);
}

TEST_CASE("range violations abort") {
  const Flat1D s;
  const FluxModel wild =
      FluxModel::from_expressions({Expr::parse("50*xi*sin(2*pi*x1)"), Expr::parse("0")}, std::nullopt, s.grid, s.xi);
  SolverConfig c;
  c.t_end = 0.5;
  c.cfl = 1.0;
  c.eta = 1e-4;
  ScalarField u0(s.grid, 0.95);
  CHECK_THROWS_AS(run(c, {s.metric, wild, s.dm}, u0), NumericalError);
  ScalarField bad(s.grid, 1.2);
  CHECK_THROWS_AS(run(c, s.problem(), bad), ConfigError);
}

TEST_CASE("heat flow against the spectral oracle") {
  auto sc = fixtures::build(fixtures::heat(64, 32));
  const Trajectory tr = sc->run();
  const auto exact = oracle::spectral_heat(sc->u0.values(), sc->cfg.eta, sc->cfg.t_end);
  double e = 0.0;
  for (std::size_t node = 0; node < exact.size(); ++node) e = std::max(e, std::abs(tr.final()(node) - exact[node]));
  CHECK(e <= 1e-4);
  CHECK(tr.steps == tr.monitors.size() - 1);
  CHECK(tr.snapshots.front().t == 0.0);
  CHECK(tr.snapshots.back().t == sc->cfg.t_end);
}

TEST_CASE("mass conservation") {
  fixtures::Spec s = fixtures::curved1d();
  s.u0 = "0.5";
  auto flat_state = fixtures::build(s);
  const Trajectory c = flat_state->run();
  CHECK(std::abs(c.monitors.back().mass - c.monitors.front().mass) <= 1e-6);

  // the divdiv stencil is not in flux form; drift is truncation error
  auto drift = [](int n) {
    const Trajectory tr = fixtures::build(fixtures::curved1d(n, 64))->run();
    return std::abs(tr.monitors.back().mass - tr.monitors.front().mass);
  };
  const double d64 = drift(64), d128 = drift(128);
  CHECK(d128 <= 1e-5);
  CHECK(d64 / d128 >= 3.5);
  CHECK(d64 / d128 <= 4.5);
}

TEST_CASE("determinism and snapshot cadence") {
  auto sc = fixtures::build(fixtures::curved1d());
  SolverConfig c = sc->cfg;
  c.snapshot_every = 7;
  const Trajectory a = sc->run(c), b = sc->run(c);
  REQUIRE(a.final().values().size() == b.final().values().size());
  CHECK(std::memcmp(a.final().values().data(), b.final().values().data(), a.final().values().size() * sizeof(double)) == 0);
  for (std::size_t k = 1; k + 1 < a.snapshots.size(); ++k) CHECK(a.snapshots[k].step % 7 == 0);
  CHECK(a.snapshots.back().step == a.steps);

  c.step_multiplier = 3;
  const Trajectory m = sc->run(c);
  CHECK(m.steps == 3 * a.steps);
  CHECK(m.dt == doctest::Approx(a.dt / 3));
}

TEST_CASE("total variation") {
  const ChartGrid grid(1, 64);
  ScalarField u(grid);
  for (std::size_t node = 0; node < u.size(); ++node) u(node) = node < 32 ? 0.2 : 0.7;
  CHECK(total_variation(u) == doctest::Approx(1.0));
  const ChartGrid g2(2, 16);
  ScalarField v(g2);
  for (std::size_t node = 0; node < v.size(); ++node) v(node) = g2.coord(node, 0) < 8 ? 0.0 : 1.0;
  // two jumps per row, 16 rows, face length 1/16
  CHECK(total_variation(v) == doctest::Approx(2.0));
}
