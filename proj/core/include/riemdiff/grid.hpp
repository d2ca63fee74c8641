#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace riemdiff {

// Uniform periodic grid on the unit torus [0,1)^d, d in {1,2}.
// Nodes sit at x = i*h; node index is i0 + n*i1 (x1 fastest).
class ChartGrid {
 public:
  ChartGrid(int dim, int n);

  int dim() const noexcept { return dim_; }
  int n() const noexcept { return n_; }
  double h() const noexcept { return h_; }
  std::size_t size() const noexcept { return size_; }
  // Cell volume h^d.
  double cell_volume() const noexcept { return cell_volume_; }

  std::size_t index(int i0, int i1 = 0) const noexcept;
  int coord(std::size_t node, int axis) const noexcept;
  double x(std::size_t node, int axis) const noexcept { return coord(node, axis) * h_; }
  // Periodic neighbour `offset` steps along `axis`.
  std::size_t shift(std::size_t node, int axis, int offset) const noexcept;

  bool operator==(const ChartGrid& other) const noexcept {
    return dim_ == other.dim_ && n_ == other.n_;
  }

 private:
  int dim_;
  int n_;
  double h_;
  std::size_t size_;
  double cell_volume_;
};

enum class FieldKind { scalar, vector, oneform, tensor11 };

constexpr int field_components(FieldKind kind, int dim) noexcept {
  switch (kind) {
    case FieldKind::scalar: return 1;
    case FieldKind::vector:
    case FieldKind::oneform: return dim;
    case FieldKind::tensor11: return dim * dim;
  }
  return 0;
}

// Node-major sampled field. Tensor11 components are stored T^k_i at k*d + i
// (contravariant index first).
template <FieldKind Kind>
class Field {
 public:
  static constexpr FieldKind kind = Kind;

  explicit Field(const ChartGrid& grid, double fill = 0.0)
      : grid_(grid),
        comps_(field_components(Kind, grid.dim())),
        data_(grid.size() * static_cast<std::size_t>(comps_), fill) {}

  const ChartGrid& grid() const noexcept { return grid_; }
  int components() const noexcept { return comps_; }
  std::size_t size() const noexcept { return grid_.size(); }

  double& operator()(std::size_t node, int c = 0) noexcept {
    return data_[node * static_cast<std::size_t>(comps_) + static_cast<std::size_t>(c)];
  }
  double operator()(std::size_t node, int c = 0) const noexcept {
    return data_[node * static_cast<std::size_t>(comps_) + static_cast<std::size_t>(c)];
  }
  // Tensor11 accessor T^k_i.
  double& operator()(std::size_t node, int k, int i) noexcept {
    return (*this)(node, k * grid_.dim() + i);
  }
  double operator()(std::size_t node, int k, int i) const noexcept {
    return (*this)(node, k * grid_.dim() + i);
  }

  std::span<double> at(std::size_t node) noexcept {
    return {data_.data() + node * static_cast<std::size_t>(comps_), static_cast<std::size_t>(comps_)};
  }
  std::span<const double> at(std::size_t node) const noexcept {
    return {data_.data() + node * static_cast<std::size_t>(comps_), static_cast<std::size_t>(comps_)};
  }

  std::vector<double>& values() noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }

  Field& operator+=(const Field& other) noexcept {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
  }
  Field& operator-=(const Field& other) noexcept {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
  }
  Field& operator*=(double s) noexcept {
    for (double& v : data_) v *= s;
    return *this;
  }
  // this += s * other
  Field& axpy(double s, const Field& other) noexcept {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += s * other.data_[i];
    return *this;
  }

 private:
  ChartGrid grid_;
  int comps_;
  std::vector<double> data_;
};

using ScalarField = Field<FieldKind::scalar>;
using VectorField = Field<FieldKind::vector>;
using OneFormField = Field<FieldKind::oneform>;
using Tensor11Field = Field<FieldKind::tensor11>;

template <FieldKind K>
Field<K> operator-(Field<K> a, const Field<K>& b) {
  a -= b;
  return a;
}
template <FieldKind K>
Field<K> operator+(Field<K> a, const Field<K>& b) {
  a += b;
  return a;
}

double max_abs(std::span<const double> values) noexcept;

template <FieldKind K>
double max_abs(const Field<K>& f) noexcept {
  return max_abs(std::span<const double>(f.values()));
}

}  // namespace riemdiff
