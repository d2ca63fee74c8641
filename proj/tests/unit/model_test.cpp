#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "riemdiff/error.hpp"
#include "riemdiff/model.hpp"
#include "riemdiff/operators.hpp"
#include "scenarios.hpp"

using namespace riemdiff;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

MetricField catalog(const char* name, int d, int n) {
  return build_metric(metric_catalog(name, d), ChartGrid(d, n));
}

std::array<double, 4> a_prime(const DiffusionModel& dm, std::size_t node, double xi) {
  std::array<double, 4> out{};
  dm.a_prime_at(node, xi, std::span<double>(out.data(), static_cast<std::size_t>(dm.grid().dim() * dm.grid().dim())));
  return out;
}
std::array<double, 4> a_val(const DiffusionModel& dm, std::size_t node, double xi) {
  std::array<double, 4> out{};
  dm.a_at(node, xi, std::span<double>(out.data(), static_cast<std::size_t>(dm.grid().dim() * dm.grid().dim())));
  return out;
}

}  // namespace

TEST_CASE("xi grid") {
  const XiGrid xi(16);
  CHECK(xi.step() == 1.0 / 16);
  CHECK(xi.edge(16) == 1.0);
  CHECK(xi.center(0) == 1.0 / 32);
  CHECK(xi.bin_of(0.0) == 0);
  CHECK(xi.bin_of(1.0) == 15);
  CHECK(xi.bin_of(-0.05) == 0);
  CHECK(xi.bin_of(0.5) == 8);
  CHECK_THROWS_AS(XiGrid(8), ConfigError);
}

TEST_CASE("A' = sigma^T sigma") {
  const MetricField flat = catalog("euclidean", 2, 16);
  const XiGrid xi(16);
  const DiffusionModel zero = DiffusionModel::from_expressions(fixtures::sigma_exprs("0"), flat, xi);
  CHECK(zero.is_zero());
  CHECK(a_prime(zero, 5, 0.3) == std::array<double, 4>{});

  const DiffusionModel id = DiffusionModel::from_expressions(fixtures::sigma_exprs("1", "0", "0", "1"), flat, xi);
  const auto ap = a_prime(id, 7, 0.77);
  CHECK(ap[0] == 1.0);
  CHECK(ap[1] == 0.0);
  CHECK(ap[2] == 0.0);
  CHECK(ap[3] == 1.0);

  // 1D with a curved metric: the transpose is trivial, A' = s^2
  const MetricField curved = catalog("curved1d", 1, 32);
  const DiffusionModel dm = DiffusionModel::from_expressions(fixtures::sigma_exprs("x1 + xi"), curved, xi);
  for (std::size_t node = 0; node < curved.grid().size(); node += 5) {
    const double s = curved.grid().x(node, 0) + 0.5;
    CHECK(a_prime(dm, node, 0.5)[0] == doctest::Approx(s * s).epsilon(1e-13));
  }
}

TEST_CASE("A is the xi antiderivative of A'") {
  const MetricField flat = catalog("euclidean", 1, 16);
  const XiGrid xi(32);
  const DiffusionModel id = DiffusionModel::from_expressions(fixtures::sigma_exprs("1"), flat, xi);
  CHECK(a_val(id, 3, 0.0)[0] == 0.0);
  for (double z : {0.1, 0.37, 0.5, 1.0}) CHECK(a_val(id, 3, z)[0] == doctest::Approx(z).epsilon(1e-14));

  // porous medium: A' = 2 xi is linear, so the interpolant integral is exact
  const DiffusionModel pm = DiffusionModel::from_expressions(fixtures::sigma_exprs("sqrt(2*xi)"), flat, xi);
  for (double z : {0.0, 0.013, 0.25, 0.6180339887, 1.0}) CHECK(std::abs(a_val(pm, 0, z)[0] - z * z) <= 1e-13);

  // d_xi A matches A' to O(dxi^2) on a smooth x-dependent sigma
  const MetricField m = catalog("warped2d", 2, 16);
  const XiGrid fine(64);
  const DiffusionModel dm = DiffusionModel::from_expressions(
      fixtures::sigma_exprs("0.5 + xi*xi + 0.1*sin(2*pi*x1)", "0.2*xi", "0", "1 + 0.3*cos(2*pi*xi)"), m, fine);
  const double dz = fine.step();
  for (std::size_t node = 0; node < m.grid().size(); node += 37) {
    for (double z : {0.25, 0.5, 0.75}) {
      const auto p = a_val(dm, node, z + dz), q = a_val(dm, node, z - dz), ap = a_prime(dm, node, z);
      for (int c = 0; c < 4; ++c) CHECK(std::abs((p[c] - q[c]) / (2 * dz) - ap[c]) <= 2e-3);
    }
  }
}

TEST_CASE("beta families") {
  const MetricField flat = catalog("euclidean", 1, 16);
  const XiGrid xi(64);
  const DiffusionModel dm = DiffusionModel::from_expressions(fixtures::sigma_exprs("1 + x1*xi"), flat, xi);
  double out[1];
  dm.beta_at(4, 0.0, out);
  CHECK(out[0] == 0.0);

  const XiPrimitive same = dm.beta_psi([](double) { return 1.0; });
  CHECK(same.cumulative().values() == dm.beta().cumulative().values());
  CHECK(same.integrand().values() == dm.beta().integrand().values());
  double b1[1], b2[1];
  same.eval(9, 0.4321, b1);
  dm.beta_at(9, 0.4321, b2);
  CHECK(b1[0] == b2[0]);
  same.eval(9, 0.0, b1);
  CHECK(b1[0] == 0.0);

  // sigma = 1, psi(z) = z: int_0^xi sqrt(z) dz = (2/3) xi^{3/2}
  auto err = [&](int bins) {
    const DiffusionModel one = DiffusionModel::from_expressions(fixtures::sigma_exprs("1"), flat, XiGrid(bins));
    const XiPrimitive bp = one.beta_psi([](double z) { return z; });
    double e = 0.0;
    for (int k = 0; k <= 100; ++k) {
      const double z = k / 100.0;
      double v[1];
      bp.eval(0, z, v);
      e = std::max(e, std::abs(v[0] - 2.0 / 3.0 * std::pow(z, 1.5)));
    }
    return e;
  };
  CHECK(err(64) <= std::pow(64.0, -1.5));
  CHECK(err(256) <= std::pow(256.0, -1.5));
}

TEST_CASE("flux model") {
  const ChartGrid grid(1, 16);
  const XiGrid xi(32);
  const FluxModel zero = FluxModel::zero(grid, xi);
  CHECK(max_abs(zero.at_xi(0.7).values()) == 0.0);

  const FluxModel exact = FluxModel::from_expressions({Expr::parse("xi^2/2 + x1"), Expr::parse("0")},
                                                      VectorExprs{Expr::parse("xi"), Expr::parse("0")}, grid, xi);
  const FluxModel fd = FluxModel::from_expressions({Expr::parse("xi^2/2 + x1"), Expr::parse("0")}, std::nullopt, grid, xi);
  for (std::size_t node = 0; node < grid.size(); ++node) {
    for (double z : {0.0, 0.3, 1.0}) {
      double a[2], b[2];
      exact.flux_at(node, z, a);
      fd.flux_at(node, z, b);
      CHECK(a[0] == doctest::Approx(z * z / 2 + grid.x(node, 0)).epsilon(1e-13));
      CHECK(b[0] == doctest::Approx(z * z / 2 + grid.x(node, 0)).epsilon(1e-12));
    }
  }
}

TEST_CASE("compatible flux construction") {
  const MetricField flat = catalog("euclidean", 2, 64);
  const XiGrid xi(16);
  const DiffusionModel zero = DiffusionModel::zero(flat, xi);
  const FluxModel f0 = make_compatible_flux(zero, flat);
  CHECK(max_abs(f0.at_xi(0.5).values()) == 0.0);
  CHECK(compat_residual(f0, zero, flat, 0.5).linf == 0.0);

  const Expr stream = Expr::parse("sin(2*pi*x1)*sin(2*pi*x2)");
  const FluxModel fs = make_compatible_flux(zero, flat, &stream);
  const VectorField w = fs.at_xi(0.3);
  double e = 0.0;
  for (std::size_t node = 0; node < w.size(); ++node) {
    const double x1 = flat.grid().x(node, 0), x2 = flat.grid().x(node, 1);
    e = std::max(e, std::abs(w(node, 0) + kTwoPi * std::sin(kTwoPi * x1) * std::cos(kTwoPi * x2)));
    e = std::max(e, std::abs(w(node, 1) - kTwoPi * std::cos(kTwoPi * x1) * std::sin(kTwoPi * x2)));
  }
  CHECK(e < 0.02);
  CHECK(max_abs(div_vector(w, flat).values()) <= 1e-11);

  const MetricField line = catalog("euclidean", 1, 16);
  CHECK_THROWS_AS(make_compatible_flux(DiffusionModel::zero(line, xi), line, &stream), ConfigError);
}

TEST_CASE("compatibility residual converges on a curved metric") {
  const XiGrid xi(16);
  auto err = [&](int n, double z) {
    const MetricField m = catalog("warped2d", 2, n);
    const DiffusionModel dm =
        DiffusionModel::from_expressions(fixtures::sigma_exprs("1 + xi", "0", "0", "1 + xi"), m, xi);
    return compat_residual(make_compatible_flux(dm, m), dm, m, z).linf;
  };
  for (double z : {0.0, 0.5, 1.0}) {
    const double e32 = err(32, z), e64 = err(64, z);
    CHECK(e64 <= 10.0 / (64.0 * 64.0));
    if (e64 > 1e-12) CHECK(e32 / e64 >= 3.2);
  }
}

TEST_CASE("perturbed flux is detected") {
  // div of the constant field (0.1, 0) is 0.1 d_1 sqrt|g| / sqrt|g|
  const MetricField m = catalog("warped2d", 2, 64);
  const XiGrid xi(16);
  const DiffusionModel dm = DiffusionModel::from_expressions(fixtures::sigma_exprs("1 + xi", "0", "0", "1 + xi"), m, xi);
  const FluxModel fm = make_compatible_flux(dm, m);
  VectorField shift(m.grid());
  for (std::size_t node = 0; node < shift.size(); ++node) shift(node, 0) = 0.1;
  const CompatResidual r = compat_residual(fm.shifted(shift), dm, m, 0.5);

  // sqrt|g| from the closed-form metric, d_1 by a fine difference
  auto sqrt_det = [](double x1, double x2) {
    const double g11 = 1.2 + 0.3 * std::sin(kTwoPi * x2) + 0.1 * std::cos(kTwoPi * x1);
    const double g22 = 1 + 0.25 * std::cos(kTwoPi * x1);
    const double g12 = 0.2 * std::sin(kTwoPi * (x1 + x2));
    return std::sqrt(g11 * g22 - g12 * g12);
  };
  double expect = 0.0;
  for (std::size_t node = 0; node < m.grid().size(); ++node) {
    const double x1 = m.grid().x(node, 0), x2 = m.grid().x(node, 1), d = 1e-6;
    const double dlog = (sqrt_det(x1 + d, x2) - sqrt_det(x1 - d, x2)) / (2 * d) / sqrt_det(x1, x2);
    expect = std::max(expect, std::abs(0.1 * dlog));
  }
  CHECK(r.linf == doctest::Approx(expect).epsilon(0.02));
  CHECK(r.linf > 100.0 * compat_residual(fm, dm, m, 0.5).linf);
}

TEST_CASE("PSD audit") {
  const MetricField m = catalog("warped2d", 2, 16);
  const XiGrid xi(16);
  const PsdAudit zero = psd_audit(DiffusionModel::zero(m, xi), m, 4);
  CHECK(zero.min_value == 0.0);

  const PsdAudit id = psd_audit(DiffusionModel::from_expressions(fixtures::sigma_exprs("1", "0", "0", "1"), m, xi), m, 4);
  CHECK(id.min_value > 0.0);
  CHECK(id.samples == m.grid().size() * 17 * 4);

  const PsdAudit rnd = psd_audit(
      DiffusionModel::from_expressions(
          fixtures::sigma_exprs("sin(7*x1 + xi)", "cos(3*x2)*xi", "exp(-xi)*sin(2*pi*x1*x2)", "0.1 - xi"), m, xi),
      m, 8, 42);
  CHECK(rnd.min_value >= -1e-10);
}
