#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "riemdiff/grid.hpp"

namespace riemdiff {

// Uniform partition of the state interval [0,1] into n bins.
class XiGrid {
 public:
  explicit XiGrid(int bins);

  int bins() const noexcept { return bins_; }
  int edges() const noexcept { return bins_ + 1; }
  double step() const noexcept { return step_; }
  double edge(int b) const noexcept { return b * step_; }
  double center(int b) const noexcept { return (b + 0.5) * step_; }

  // Bin holding xi, clamped to [0, bins-1]; values outside [0,1] map to an end
  // bin so callers extrapolate from it.
  int bin_of(double xi) const noexcept;

 private:
  int bins_;
  double step_;
};

// Per-node samples at every xi edge: value(node, e, c), e in [0, bins].
class XiTable {
 public:
  XiTable(const ChartGrid& grid, const XiGrid& xi, int components);

  const ChartGrid& grid() const noexcept { return grid_; }
  const XiGrid& xi() const noexcept { return xi_; }
  int components() const noexcept { return comps_; }

  double& operator()(std::size_t node, int e, int c = 0) noexcept { return data_[offset(node, e) + c]; }
  double operator()(std::size_t node, int e, int c = 0) const noexcept { return data_[offset(node, e) + c]; }
  std::span<const double> at(std::size_t node, int e) const noexcept {
    return {data_.data() + offset(node, e), static_cast<std::size_t>(comps_)};
  }
  std::span<double> at(std::size_t node, int e) noexcept {
    return {data_.data() + offset(node, e), static_cast<std::size_t>(comps_)};
  }

  // Piecewise-linear interpolation in xi (linear extrapolation outside [0,1]).
  void interp(std::size_t node, double xi, std::span<double> out) const noexcept;

  // Whole-grid slice at edge e.
  template <FieldKind K>
  Field<K> slice(int e) const {
    Field<K> f(grid_);
    for (std::size_t node = 0; node < grid_.size(); ++node) {
      auto src = at(node, e);
      for (int c = 0; c < comps_; ++c) f(node, c) = src[c];
    }
    return f;
  }
  template <FieldKind K>
  void set_slice(int e, const Field<K>& f) {
    for (std::size_t node = 0; node < grid_.size(); ++node) {
      auto dst = at(node, e);
      for (int c = 0; c < comps_; ++c) dst[c] = f(node, c);
    }
  }

  std::vector<double>& values() noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }

 private:
  std::size_t offset(std::size_t node, int e) const noexcept {
    return (node * static_cast<std::size_t>(xi_.edges()) + static_cast<std::size_t>(e)) *
           static_cast<std::size_t>(comps_);
  }

  ChartGrid grid_;
  XiGrid xi_;
  int comps_;
  std::vector<double> data_;
};

// Antiderivative in xi of a tabulated integrand q, with value 0 at xi = 0.
//
// Evaluation integrates the piecewise-linear interpolant of q exactly, so at
// edges it reproduces the cumulative trapezoid sums and in between it is
// Q_b + s q_b + s^2 (q_{b+1} - q_b) / (2 dxi). The result is linear in the
// table: applying a linear x-operator to every edge of q and then
// evaluating gives the operator applied to the frozen antiderivative.
class XiPrimitive {
 public:
  explicit XiPrimitive(XiTable integrand);

  const XiTable& integrand() const noexcept { return q_; }
  const XiTable& cumulative() const noexcept { return cum_; }
  const XiGrid& xi() const noexcept { return q_.xi(); }
  const ChartGrid& grid() const noexcept { return q_.grid(); }
  int components() const noexcept { return q_.components(); }

  void eval(std::size_t node, double xi, std::span<double> out) const noexcept;

  // Field of values at a single xi for every node.
  template <FieldKind K>
  Field<K> at_xi(double xi) const {
    Field<K> f(grid());
    for (std::size_t node = 0; node < grid().size(); ++node) eval(node, xi, f.at(node));
    return f;
  }
  // Field of values at xi = u(x) per node.
  template <FieldKind K>
  Field<K> compose(const Field<FieldKind::scalar>& u) const {
    Field<K> f(grid());
    for (std::size_t node = 0; node < grid().size(); ++node) eval(node, u(node), f.at(node));
    return f;
  }

 private:
  XiTable q_;
  XiTable cum_;
};

}  // namespace riemdiff
