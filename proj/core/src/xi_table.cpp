#include "riemdiff/xi_table.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "riemdiff/error.hpp"

namespace riemdiff {

XiGrid::XiGrid(int bins) : bins_(bins), step_(1.0 / bins) {
  if (bins < 16) throw ConfigError("xi bins must be >= 16, got " + std::to_string(bins));
}

int XiGrid::bin_of(double xi) const noexcept {
  const double b = std::floor(xi * bins_);
  if (!(b >= 0.0)) return 0;
  if (b >= bins_ - 1) return bins_ - 1;
  return static_cast<int>(b);
}

XiTable::XiTable(const ChartGrid& grid, const XiGrid& xi, int components)
    : grid_(grid),
      xi_(xi),
      comps_(components),
      data_(grid.size() * static_cast<std::size_t>(xi.edges()) * static_cast<std::size_t>(components), 0.0) {}

void XiTable::interp(std::size_t node, double xi, std::span<double> out) const noexcept {
  const int b = xi_.bin_of(xi);
  const double w = (xi - xi_.edge(b)) / xi_.step();
  auto lo = at(node, b);
  auto hi = at(node, b + 1);
  for (int c = 0; c < comps_; ++c) out[c] = lo[c] + w * (hi[c] - lo[c]);
}

XiPrimitive::XiPrimitive(XiTable integrand) : q_(std::move(integrand)), cum_(q_.grid(), q_.xi(), q_.components()) {
  const int ne = q_.xi().edges();
  const double half = 0.5 * q_.xi().step();
  const int nc = q_.components();
  for (std::size_t node = 0; node < q_.grid().size(); ++node) {
    for (int c = 0; c < nc; ++c) cum_(node, 0, c) = 0.0;
    for (int e = 1; e < ne; ++e) {
      for (int c = 0; c < nc; ++c) {
        cum_(node, e, c) = cum_(node, e - 1, c) + half * (q_(node, e - 1, c) + q_(node, e, c));
      }
    }
  }
}

void XiPrimitive::eval(std::size_t node, double xi, std::span<double> out) const noexcept {
  const XiGrid& g = q_.xi();
  const int b = g.bin_of(xi);
  const double s = xi - g.edge(b);
  const double k = 0.5 * s * s / g.step();
  auto qb = q_.at(node, b);
  auto qn = q_.at(node, b + 1);
  auto cb = cum_.at(node, b);
  for (int c = 0; c < q_.components(); ++c) out[c] = cb[c] + s * qb[c] + k * (qn[c] - qb[c]);
}

}  // namespace riemdiff
