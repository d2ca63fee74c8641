#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "riemdiff/expr.hpp"
#include "riemdiff/grid.hpp"

namespace riemdiff {

// Expression table for g_ij in the variables x1, x2. Entries (i,j) and (j,i)
// must evaluate identically at every node.
struct MetricSpec {
  std::string name = "custom";
  std::array<std::array<Expr, 2>, 2> g;
};

// Named metrics: "euclidean" (any d), "curved1d" (d=1, g11 = (1+0.5 sin 2pi x)^2),
// "diag2d" (d=2, diag(1+0.3cos 2pi x1, 1+0.3cos 2pi x2)) and "warped2d"
// (d=2, non-diagonal).
MetricSpec metric_catalog(std::string_view name, int dim);
std::vector<std::string> metric_catalog_names();

// Sampled metric with everything the operators need precomputed.
//
// Christoffel symbols come from central differences of the sampled g_ij
// followed by Gamma^k_ij = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij); their
// first derivatives (needed by Div Div) are central differences of the
// sampled Gamma.
//
// The contracted symbol Gamma^j_kj is stored as D_k sqrt|g| / sqrt|g| with the
// same central difference D; it agrees with the trace of the table above to
// O(h^2).
class MetricField {
 public:
  // `g` is node-major, d*d entries per node.
  MetricField(const ChartGrid& grid, std::vector<double> g, double lambda_min = 1e-6);

  const ChartGrid& grid() const noexcept { return grid_; }
  int dim() const noexcept { return grid_.dim(); }

  double g(std::size_t node, int i, int j) const noexcept { return g_[node * d2_ + i * d_ + j]; }
  double ginv(std::size_t node, int i, int j) const noexcept { return ginv_[node * d2_ + i * d_ + j]; }
  double sqrt_det(std::size_t node) const noexcept { return sqrtg_[node]; }
  // Gamma^k_ij
  double christoffel(std::size_t node, int k, int i, int j) const noexcept {
    return gamma_[node * d3_ + k * d2_ + i * d_ + j];
  }
  // d_l Gamma^k_ij
  double dchristoffel(std::size_t node, int l, int k, int i, int j) const noexcept {
    return dgamma_[node * d3_ * d_ + l * d3_ + k * d2_ + i * d_ + j];
  }
  // Gamma^j_kj
  double contracted(std::size_t node, int k) const noexcept { return contracted_[node * d_ + k]; }
  // d_l Gamma^j_kj
  double dcontracted(std::size_t node, int l, int k) const noexcept { return dcontracted_[node * d2_ + l * d_ + k]; }

  double lambda_min() const noexcept { return lambda_min_; }
  // Smallest eigenvalue of g over all nodes.
  double min_eigenvalue() const noexcept { return min_eig_; }
  // Largest eigenvalue of g^{-1} over all nodes (grid-to-metric length scale).
  double max_inverse_eigenvalue() const noexcept { return max_inv_eig_; }
  // Riemannian volume of the torus, sum sqrt|g| h^d.
  double volume() const noexcept;

 private:
  ChartGrid grid_;
  std::size_t d_;
  std::size_t d2_;
  std::size_t d3_;
  double lambda_min_;
  double min_eig_ = 0.0;
  double max_inv_eig_ = 0.0;
  std::vector<double> g_, ginv_, sqrtg_, gamma_, dgamma_, contracted_, dcontracted_;
};

MetricField build_metric(const MetricSpec& spec, const ChartGrid& grid, double lambda_min = 1e-6);

// Eigenvalues (ascending) of a symmetric 1x1 or 2x2 matrix stored row-major.
std::array<double, 2> symmetric_eigenvalues(std::span<const double> m, int dim) noexcept;

// Pointwise residuals of two metric identities, max over nodes:
//   d_k sqrt|g| - Gamma^s_ks sqrt|g|                (sqrt_det)
//   d_j g^ij + g^ia Gamma^j_aj + g^jb Gamma^i_jb    (inverse)
struct MetricIdentityResiduals {
  double sqrt_det = 0.0;
  double inverse = 0.0;
};
MetricIdentityResiduals metric_identity_residuals(const MetricField& metric);

}  // namespace riemdiff
