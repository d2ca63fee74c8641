#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "riemdiff/expr.hpp"
#include "riemdiff/grid.hpp"
#include "riemdiff/metric.hpp"
#include "riemdiff/xi_table.hpp"

namespace riemdiff {

// sigma^k_i(x, xi) as expressions in x1, x2, xi; only the leading d x d block is used.
using TensorExprs = std::array<std::array<Expr, 2>, 2>;
using VectorExprs = std::array<Expr, 2>;

// Scalar function of the state variable, e.g. psi in beta^psi.
using XiFunction = std::function<double(double)>;

// Diffusion coefficients sampled on grid x XiGrid edges.
//   sigma, sigma^T (metric transpose), A' = sigma^T sigma,
//   A = int_0^xi A', beta = int_0^xi sigma^T.
// The metric is only consulted during construction.
class DiffusionModel {
 public:
  DiffusionModel(const MetricField& metric, XiTable sigma);

  static DiffusionModel from_expressions(const TensorExprs& sigma, const MetricField& metric, const XiGrid& xi);
  static DiffusionModel zero(const MetricField& metric, const XiGrid& xi);

  const ChartGrid& grid() const noexcept { return sigma_.grid(); }
  const XiGrid& xi() const noexcept { return sigma_.xi(); }
  const XiTable& sigma() const noexcept { return sigma_; }
  const XiTable& sigma_t() const noexcept { return beta_.integrand(); }
  const XiTable& a_prime() const noexcept { return a_.integrand(); }
  const XiPrimitive& a() const noexcept { return a_; }
  const XiPrimitive& beta() const noexcept { return beta_; }
  bool is_zero() const noexcept { return zero_; }

  // A'^k_i = (sigma^T)^k_m sigma^m_i, linearly interpolated between edges.
  void a_prime_at(std::size_t node, double xi, std::span<double> out) const noexcept;
  void a_at(std::size_t node, double xi, std::span<double> out) const noexcept { a_.eval(node, xi, out); }
  void beta_at(std::size_t node, double xi, std::span<double> out) const noexcept { beta_.eval(node, xi, out); }

  // int_0^xi sqrt(psi(z)) sigma^T(x, z) dz on the same quadrature path as beta.
  XiPrimitive beta_psi(const XiFunction& psi) const;

  // Largest operator norm of A' over all samples (for the time step bound).
  double max_a_prime_norm() const noexcept { return max_norm_; }

 private:
  XiTable sigma_;
  XiPrimitive a_;
  XiPrimitive beta_;
  bool zero_ = true;
  double max_norm_ = 0.0;
};

// Flux f(x, xi) = f0(x) + int_0^xi f'(x, z) dz with f' tabulated on the edges.
class FluxModel {
 public:
  FluxModel(VectorField f0, XiTable f_prime);

  // f' from `df` when every component is given, else centred differences of
  // the sampled f in xi (second-order one-sided at the ends).
  static FluxModel from_expressions(const VectorExprs& f, const std::optional<VectorExprs>& df,
                                    const ChartGrid& grid, const XiGrid& xi);
  static FluxModel zero(const ChartGrid& grid, const XiGrid& xi);

  const ChartGrid& grid() const noexcept { return f0_.grid(); }
  const XiGrid& xi() const noexcept { return increment_.xi(); }
  const VectorField& f0() const noexcept { return f0_; }
  const XiTable& f_prime() const noexcept { return increment_.integrand(); }
  const XiPrimitive& increment() const noexcept { return increment_; }

  void flux_at(std::size_t node, double xi, std::span<double> out) const noexcept;
  VectorField at_xi(double xi) const;
  VectorField compose(const ScalarField& u) const;

  // Same f' with f0 + offset.
  FluxModel shifted(const VectorField& offset) const;

  double max_f_prime_norm(const MetricField& metric) const;

 private:
  VectorField f0_;
  XiPrimitive increment_;
};

// Flux satisfying Div f(xi) = Div Div A(xi) by construction:
//   f' = (Div A')^sharp + d_xi W,   f(., 0) = W(., 0),
// with the divergence-free field W^1 = -d_2 psi / sqrt|g|, W^2 = d_1 psi / sqrt|g|
// built from an optional stream function psi(x1, x2, xi). Requires d = 2 when
// a stream is given.
FluxModel make_compatible_flux(const DiffusionModel& dm, const MetricField& metric, const Expr* stream = nullptr);

struct CompatResidual {
  double xi = 0.0;
  double linf = 0.0;
  double l1 = 0.0;
  std::size_t argmax = 0;
};

// r = div f(., xi) - Div Div A(., xi)
ScalarField compat_field(const FluxModel& fm, const DiffusionModel& dm, const MetricField& metric, double xi);
CompatResidual compat_residual(const FluxModel& fm, const DiffusionModel& dm, const MetricField& metric, double xi);

// Magnitude of the two sides, used to scale the audit threshold 10 h^2 scale:
// 1 + max over the samples of |div f(., xi)|_inf and |Div Div A(., xi)|_inf.
double compat_scale(const FluxModel& fm, const DiffusionModel& dm, const MetricField& metric,
                    std::span<const double> xis);

struct PsdAudit {
  double min_value = 0.0;  // min <A' v, v>_g over all samples
  std::size_t node = 0;
  int edge = 0;
  std::size_t samples = 0;
};

// Random directions drawn per (node, edge) from a seeded mt19937_64.
PsdAudit psd_audit(const DiffusionModel& dm, const MetricField& metric, int n_dirs, std::uint64_t seed = 1);

// Evaluate an expression at every (node, edge) into component c of a table.
void sample_expression(const Expr& e, XiTable& table, int c);
// Evaluate an expression at every node (t = 0, xi = 0 unless bound by the expression).
ScalarField sample_expression(const Expr& e, const ChartGrid& grid);

}  // namespace riemdiff
