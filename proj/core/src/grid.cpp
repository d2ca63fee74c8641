#include "riemdiff/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "riemdiff/error.hpp"

namespace riemdiff {

ChartGrid::ChartGrid(int dim, int n) : dim_(dim), n_(n) {
  if (dim != 1 && dim != 2) throw ConfigError("grid dimension must be 1 or 2, got " + std::to_string(dim));
  if (n < 16 || (n & (n - 1)) != 0) {
    throw ConfigError("points per axis must be a power of two >= 16, got " + std::to_string(n));
  }
  h_ = 1.0 / n;
  size_ = dim == 1 ? static_cast<std::size_t>(n) : static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  cell_volume_ = std::pow(h_, dim);
}

std::size_t ChartGrid::index(int i0, int i1) const noexcept {
  return static_cast<std::size_t>(i0) + static_cast<std::size_t>(n_) * static_cast<std::size_t>(i1);
}

int ChartGrid::coord(std::size_t node, int axis) const noexcept {
  const auto un = static_cast<std::size_t>(n_);
  return axis == 0 ? static_cast<int>(node % un) : static_cast<int>(node / un);
}

std::size_t ChartGrid::shift(std::size_t node, int axis, int offset) const noexcept {
  int c0 = coord(node, 0);
  int c1 = dim_ == 2 ? coord(node, 1) : 0;
  int& c = axis == 0 ? c0 : c1;
  c = ((c + offset) % n_ + n_) % n_;
  return index(c0, c1);
}

double max_abs(std::span<const double> values) noexcept {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace riemdiff
