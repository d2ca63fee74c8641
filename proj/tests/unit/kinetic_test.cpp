#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "riemdiff/error.hpp"
#include "riemdiff/kinetic.hpp"
#include "riemdiff/mollifier.hpp"
#include "riemdiff/operators.hpp"
#include "scenarios.hpp"

using namespace riemdiff;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ScalarField wave(const ChartGrid& grid, double mean, double amp) {
  ScalarField u(grid);
  for (std::size_t node = 0; node < u.size(); ++node) u(node) = mean + amp * std::sin(kTwoPi * grid.x(node, 0));
  return u;
}

}  // namespace

TEST_CASE("mollifier profiles and kernels") {
  // midpoint rule on a fine grid
  const int m = 200000;
  double s2 = 0.0, s1 = 0.0;
  for (int k = 0; k < m; ++k) {
    const double s = -1.0 + (k + 0.5) * (2.0 / m);
    s2 += omega2(s) * (2.0 / m);
    s1 += omega1(s) * (2.0 / m);
  }
  CHECK(std::abs(s2 - 1.0) <= 1e-10);
  CHECK(std::abs(s1 - 1.0) <= 1e-10);
  CHECK(omega1(0.0) == 0.0);
  CHECK(omega1(0.01) == 0.0);
  CHECK(omega1(-1.0) == 0.0);
  CHECK(omega1(-0.5) > 0.0);

  for (KernelShape shape : {KernelShape::symmetric, KernelShape::one_sided}) {
    const Kernel1D k = make_kernel(shape, 0.1, 0.01);
    double sum = 0.0;
    for (double w : k.weights) {
      CHECK(w >= 0.0);
      sum += w;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(make_kernel(KernelShape::symmetric, 0.015, 0.01), ConfigError);
}

TEST_CASE("x mollification") {
  const ChartGrid grid(1, 256);
  const ScalarField c(grid, 0.37);
  const ScalarField mc = mollify_x(c, 16 * grid.h());
  for (double v : mc.values()) CHECK(v == doctest::Approx(0.37).epsilon(1e-14));

  ScalarField step(grid);
  for (std::size_t node = 0; node < step.size(); ++node) step(node) = grid.x(node, 0) < 0.5 ? 0.0 : 1.0;
  const ScalarField ms = mollify_x(step, 8 * grid.h());
  for (double v : ms.values()) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0 + 1e-15);
  }

  // one-sided smoothing of a Lipschitz field is first order in eps
  const ScalarField u = wave(grid, 0.5, 0.4);
  auto l1 = [&](double eps) {
    ScalarField d = mollify_x(u, eps, KernelShape::one_sided);
    d -= u;
    double s = 0.0;
    for (double v : d.values()) s += std::abs(v) * grid.h();
    return s;
  };
  const double r = l1(16 * grid.h()) / l1(8 * grid.h());
  CHECK(r >= 1.7);
  CHECK(r <= 2.3);
}

TEST_CASE("kinetic function from u") {
  const ChartGrid grid(1, 16);
  const XiGrid xi(16);
  const KineticFunction chi = chi_from_u(ScalarField(grid, 0.5), xi);
  CHECK(chi(3, xi.bin_of(0.3)) == 1.0);
  CHECK(chi(3, xi.bin_of(0.7)) == 0.0);
  const KineticFunction zero = chi_from_u(ScalarField(grid, 0.0), xi);
  for (double v : zero.values()) CHECK(v == 0.0);

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  ScalarField r(grid);
  for (double& v : r.values()) v = U(rng);
  const KineticFunction cr = chi_from_u(r, xi);
  CHECK(cr.admissible());
  const ScalarField back = u_from_chi(cr);
  for (std::size_t node = 0; node < r.size(); ++node) CHECK(std::abs(back(node) - r(node)) <= 0.5 * xi.step() + 1e-15);

  KineticFunction ones(grid, xi, 1.0);
  const ScalarField uo = u_from_chi(ones);
  for (double v : uo.values()) CHECK(v == 1.0);

  ScalarField neg(grid, 0.2);
  neg(4) = -0.01;
  CHECK_THROWS_AS(chi_from_u(neg, xi), ConfigError);
}

TEST_CASE("reconstruction") {
  const ChartGrid grid(1, 32);
  const XiGrid xi(64);
  const ScalarField u = wave(grid, 0.5, 0.4);
  const KineticFunction chi = chi_from_u(u, xi);
  const ScalarField a = reconstruct([](double) { return 1.0; }, chi), b = u_from_chi(chi);
  CHECK(a.values() == b.values());
  const ScalarField sq = reconstruct([](double z) { return 2.0 * z; }, chi);
  for (std::size_t node = 0; node < u.size(); ++node) CHECK(std::abs(sq(node) - u(node) * u(node)) <= xi.step());

  auto sc = fixtures::build(fixtures::shock(32, 64));
  const ScalarField f = reconstruct(sc->fm.f_prime(), 0, chi);
  const VectorField direct = sc->fm.compose(u), base = sc->fm.at_xi(0.0);
  for (std::size_t node = 0; node < u.size(); ++node) {
    CHECK(std::abs(f(node) - (direct(node, 0) - base(node, 0))) <= xi.step());
  }
}

TEST_CASE("xi mollification keeps columns monotone") {
  const ChartGrid grid(1, 32);
  const XiGrid xi(64);
  const KineticFunction chi = chi_from_u(wave(grid, 0.5, 0.4), xi);
  const KineticFunction m = mollify_xi(chi, 4 * xi.step());
  CHECK(m.admissible(1e-14));
  const ScalarField u0 = u_from_chi(chi), u1 = u_from_chi(m);
  for (std::size_t node = 0; node < u0.size(); ++node) CHECK(std::abs(u1(node) - u0(node)) <= 4 * xi.step());
}

TEST_CASE("d_xi chi identity") {
  const ChartGrid grid(1, 64);
  const ScalarField one(grid, 1.0), zero(grid, 0.0);
  const double eps = 4 * grid.h();
  CHECK(dchi_identity_check(ScalarField(grid, 0.375), one, XiGrid(64), eps, 4.0 / 64) <= 1e-8);
  CHECK(dchi_identity_check(wave(grid, 0.5, 0.3), zero, XiGrid(64), eps, 4.0 / 64) == 0.0);

  ScalarField bump(grid);
  for (std::size_t node = 0; node < bump.size(); ++node) bump(node) = 1.0 + 0.5 * std::cos(kTwoPi * grid.x(node, 0));
  const ScalarField u = wave(grid, 0.5, 0.3);
  const double delta = 0.125;
  const double e1 = dchi_identity_check(u, bump, XiGrid(64), eps, delta);
  const double e2 = dchi_identity_check(u, bump, XiGrid(128), eps, delta);
  CHECK(e1 / e2 >= 1.6);
}

TEST_CASE("kinetic residual of a constant state") {
  fixtures::Spec cs = fixtures::porous(64, 32);
  cs.compatible = true;
  cs.u0 = "0.5";
  cs.t_end = 0.01;
  auto sc = fixtures::build(cs);
  const KineticResidual r = kinetic_residual(sc->run(), sc->problem(), kinetic_battery(3, 5));
  CHECK(r.values.size() == 5);
  CHECK(r.max_abs <= 1e-8);
}

TEST_CASE("contraction functional") {
  auto sc = fixtures::build(fixtures::curved1d(64, 64));
  const XiGrid& xi = sc->xi;
  const KineticFunction a = chi_from_u(sc->u0, xi);
  CHECK(contraction(a, a, sc->metric) == 0.0);

  const KineticFunction u = chi_from_u(ScalarField(sc->grid, 0.7), xi), v = chi_from_u(ScalarField(sc->grid, 0.4), xi);
  CHECK(std::abs(contraction(u, v, sc->metric) - 0.3 * sc->metric.volume()) <= xi.step());
  CHECK(contraction(v, u, sc->metric) == 0.0);

  // per-node bracket (u - v)_+
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const ChartGrid g1(1, 16);
  const MetricField flat = build_metric(metric_catalog("euclidean", 1), g1);
  for (int k = 0; k < 50; ++k) {
    const double p = U(rng), q = U(rng);
    const double got =
        contraction(chi_from_u(ScalarField(g1, p), xi), chi_from_u(ScalarField(g1, q), xi), flat);
    CHECK(std::abs(got - std::max(p - q, 0.0)) <= xi.step());
  }
}

TEST_CASE("Friedrichs commutator") {
  const ChartGrid grid(1, 512);
  const double h = grid.h();
  ScalarField ind(grid);
  for (std::size_t node = 0; node < ind.size(); ++node) {
    const double x = grid.x(node, 0);
    ind(node) = (x >= 0.25 && x < 0.75) ? 1.0 : 0.0;
  }
  const std::vector<double> eps{32 * h, 16 * h, 8 * h, 4 * h};
  for (const auto& row : friedrichs_commutator(Expr::parse("2.5"), ind, eps, FriedrichsPart::ii)) CHECK(row.l1 <= 1e-14);

  const auto rows = friedrichs_commutator(Expr::parse("1 + 0.5*sin(2*pi*x1)"), ind, eps, FriedrichsPart::ii);
  for (std::size_t k = 1; k < rows.size(); ++k) CHECK(rows[k].l1 < rows[k - 1].l1);
  CHECK(rows.back().l1 <= 0.25 * rows.front().l1);

  const ScalarField smooth = wave(grid, 0.5, 0.4);
  for (FriedrichsPart part : {FriedrichsPart::i, FriedrichsPart::ii}) {
    const auto s = friedrichs_commutator(Expr::parse("1 + 0.5*sin(2*pi*x1)"), smooth, {32 * h, 16 * h}, part,
                                         KernelShape::one_sided);
    const double r = s[0].l1 / s[1].l1;
    CHECK(r >= 1.7);
    CHECK(r <= 2.3);
  }
}
