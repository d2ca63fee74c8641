#include "riemdiff/ledger.hpp"

#include <cmath>

#include "riemdiff/operators.hpp"

namespace riemdiff {

HatWeights hat_weights(const XiGrid& xi, double value) noexcept {
  const double p = value / xi.step() - 0.5;
  const int last = xi.bins() - 1;
  HatWeights w;
  if (!(p > 0.0)) return w;
  if (p >= last) {
    w.lo = w.hi = last;
    return w;
  }
  w.lo = static_cast<int>(std::floor(p));
  w.hi = w.lo + 1;
  w.w_hi = p - w.lo;
  w.w_lo = 1.0 - w.w_hi;
  return w;
}

DissipationDensities dissipation_densities(const ScalarField& u, const DiffusionModel& dm, const MetricField& metric,
                                           double eta) {
  const ChartGrid& grid = u.grid();
  const int d = grid.dim();
  const OneFormField du = differential(u);
  DissipationDensities out{oneform_norm_sq(du, metric), ScalarField(grid)};
  out.m *= eta;
  if (dm.is_zero()) return out;

  OneFormField w(grid);
  std::array<double, 4> st{};
  for (std::size_t node = 0; node < grid.size(); ++node) {
    dm.sigma_t().interp(node, u(node), st);
    for (int i = 0; i < d; ++i) {
      double s = 0.0;
      for (int j = 0; j < d; ++j) s += st[static_cast<std::size_t>(j * d + i)] * du(node, j);
      w(node, i) = s;
    }
  }
  out.n = oneform_norm_sq(w, metric);
  return out;
}

DissipationLedger::DissipationLedger(const XiGrid& xi)
    : xi_(xi), m_(static_cast<std::size_t>(xi.bins()), 0.0), n_(static_cast<std::size_t>(xi.bins()), 0.0) {}

void DissipationLedger::deposit(const ScalarField& u, const DissipationDensities& dens, const MetricField& metric,
                                double weight) {
  const double cell = u.grid().cell_volume();
  for (std::size_t node = 0; node < u.size(); ++node) {
    const double vol = weight * metric.sqrt_det(node) * cell;
    const double dm = dens.m(node) * vol;
    const double dn = dens.n(node) * vol;
    const HatWeights hw = hat_weights(xi_, u(node));
    m_[static_cast<std::size_t>(hw.lo)] += hw.w_lo * dm;
    m_[static_cast<std::size_t>(hw.hi)] += hw.w_hi * dm;
    n_[static_cast<std::size_t>(hw.lo)] += hw.w_lo * dn;
    n_[static_cast<std::size_t>(hw.hi)] += hw.w_hi * dn;
    total_m_ += dm;
    total_n_ += dn;
  }
}

}  // namespace riemdiff
