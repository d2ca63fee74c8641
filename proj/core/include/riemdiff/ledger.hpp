#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "riemdiff/grid.hpp"
#include "riemdiff/metric.hpp"
#include "riemdiff/model.hpp"
#include "riemdiff/xi_table.hpp"

namespace riemdiff {

// Linear hat weights of a point mass at xi over the bin centres. Mass outside
// [c_0, c_last] goes entirely to the end bin, so the weights always sum to 1.
struct HatWeights {
  int lo = 0;
  int hi = 0;
  double w_lo = 1.0;
  double w_hi = 0.0;
};
HatWeights hat_weights(const XiGrid& xi, double value) noexcept;

// Pointwise dissipation densities of the viscous flow:
//   m = eta |grad u|^2_g
//   n = |w|^2_g with w_i = (sigma^T(x, u))^j_i d_j u
struct DissipationDensities {
  ScalarField m;
  ScalarField n;
};
DissipationDensities dissipation_densities(const ScalarField& u, const DiffusionModel& dm, const MetricField& metric,
                                           double eta);

// xi-binned totals of the dissipation measures m_eta and n_eta integrated over
// time and dmu.
class DissipationLedger {
 public:
  explicit DissipationLedger(const XiGrid& xi);

  const XiGrid& xi() const noexcept { return xi_; }
  const std::vector<double>& m() const noexcept { return m_; }
  const std::vector<double>& n() const noexcept { return n_; }
  double total_m() const noexcept { return total_m_; }
  double total_n() const noexcept { return total_n_; }

  // Adds weight * density * sqrt|g| h^d per node, spread over the bins by
  // hat_weights(u(x)).
  void deposit(const ScalarField& u, const DissipationDensities& dens, const MetricField& metric, double weight);

 private:
  XiGrid xi_;
  std::vector<double> m_;
  std::vector<double> n_;
  double total_m_ = 0.0;
  double total_n_ = 0.0;
};

}  // namespace riemdiff
