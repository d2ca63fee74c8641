#pragma once

#include <cstddef>
#include <vector>

#include "riemdiff/expr.hpp"
#include "riemdiff/grid.hpp"
#include "riemdiff/metric.hpp"
#include "riemdiff/model.hpp"
#include "riemdiff/mollifier.hpp"
#include "riemdiff/solver.hpp"
#include "riemdiff/test_functions.hpp"
#include "riemdiff/xi_table.hpp"

namespace riemdiff {

// chi(x, xi_b) sampled at the bin centres of an XiGrid, node-major.
class KineticFunction {
 public:
  KineticFunction(const ChartGrid& grid, const XiGrid& xi, double fill = 0.0);

  const ChartGrid& grid() const noexcept { return grid_; }
  const XiGrid& xi() const noexcept { return xi_; }
  double& operator()(std::size_t node, int b) noexcept { return data_[node * stride() + static_cast<std::size_t>(b)]; }
  double operator()(std::size_t node, int b) const noexcept {
    return data_[node * stride() + static_cast<std::size_t>(b)];
  }
  std::vector<double>& values() noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }

  // Every column non-increasing in xi and all values in [0,1] (up to tol).
  bool admissible(double tol = 0.0) const noexcept;

 private:
  std::size_t stride() const noexcept { return static_cast<std::size_t>(xi_.bins()); }
  ChartGrid grid_;
  XiGrid xi_;
  std::vector<double> data_;
};

// chi = 1 where xi_b <= u(x), else 0 (bin-centre rule). Samples below
// -tolerance are rejected; those in [-tolerance, 0) count as 0.
KineticFunction chi_from_u(const ScalarField& u, const XiGrid& xi, double tolerance = 0.0);
// dxi sum_b chi(x, xi_b)
ScalarField u_from_chi(const KineticFunction& chi);
// dxi sum_b h'(x, xi_b) chi(x, xi_b); approximates h(x, u) when h(x, 0) = 0.
ScalarField reconstruct(const XiFunction& h_prime, const KineticFunction& chi);
// Same with h' read from component c of an edge table, averaged to the centres.
ScalarField reconstruct(const XiTable& h_prime, int c, const KineticFunction& chi);

// int_M int chi (1 - chi~) dxi dmu
double contraction(const KineticFunction& chi, const KineticFunction& other, const MetricField& metric);

// One-sided omega1 mollification in xi (clamped at the ends).
KineticFunction mollify_xi(const KineticFunction& chi, double delta);
// Full (t, x, xi) mollification of a uniformly spaced series.
std::vector<KineticFunction> mollify_txxi(const std::vector<KineticFunction>& series, double dt, double eps,
                                          double delta);

// Max-norm of d_xi (phi chi_u)^{eps,delta} - [phi^eps rho_delta(xi) - (phi delta(xi - u)) * rho_{eps,delta}]
// on a xi grid extended below 0 and above 1 so that no kernel is truncated.
// d_xi is the forward difference; delta(xi - u) is hat-deposited on the edges.
double dchi_identity_check(const ScalarField& u, const ScalarField& phi, const XiGrid& xi, double eps, double delta);

struct KineticResidual {
  std::vector<double> values;
  double max_abs = 0.0;
  // Same residual with the dissipation measures dropped.
  std::vector<double> ablated;
  double ablated_max_abs = 0.0;
};

// Weak residual of
//   d_t chi + Div(chi f') - Div Div(chi A') - eta Lap chi - d_xi (n + m) = 0
// tested against tau(t) phi(x) theta(xi) from the battery, theta compactly
// supported in (0,1). The xi-integrals are bin sums over the binary chi of
// each snapshot; d_xi(n + m) is moved onto theta by parts.
KineticResidual kinetic_residual(const Trajectory& tr, const Problem& p, const std::vector<KineticTest>& battery);

// Contraction between matching snapshots (equal times) of two runs.
struct ContractionPoint {
  double t = 0.0;
  double forward = 0.0;   // int chi_a (1 - chi_b)
  double backward = 0.0;  // int chi_b (1 - chi_a)
};
std::vector<ContractionPoint> contraction_series(const Trajectory& a, const Trajectory& b, const MetricField& metric,
                                                 const XiGrid& xi);

enum class FriedrichsPart { i, ii };
struct FriedrichsRow {
  double eps = 0.0;
  double l1 = 0.0;
};
// Along axis 0 with D the central difference and * the x-mollifier:
//   part ii: (a D v) * rho_eps - a (D v * rho_eps)
//   part i:  D(a v) * rho_eps - D(a (v * rho_eps))
// L^1 norm (flat measure) for each eps.
std::vector<FriedrichsRow> friedrichs_commutator(const Expr& a, const ScalarField& v, const std::vector<double>& eps,
                                                 FriedrichsPart part, KernelShape shape = KernelShape::symmetric);

}  // namespace riemdiff
