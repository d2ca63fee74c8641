#pragma once

// Truncated bivariate Taylor jets. A Jet holds c[i][j] = d1^i d2^j f / (i! j!)
// at a base point for i + j <= order. Arithmetic is exact up to `order`, so
// derivatives of closed-form test functions come out to rounding.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace jet {

constexpr int kMax = 4;

struct Jet {
  std::array<std::array<double, kMax + 1>, kMax + 1> c{};
  int order = kMax;

  Jet() = default;
  Jet(double v) { c[0][0] = v; }  // NOLINT(google-explicit-constructor)

  static Jet variable(double at, int axis) {
    Jet j(at);
    if (axis == 0) j.c[1][0] = 1.0;
    else j.c[0][1] = 1.0;
    return j;
  }

  double value() const { return c[0][0]; }

  // d_axis; the result is exact to order - 1.
  Jet d(int axis) const {
    Jet r;
    r.order = order - 1;
    for (int i = 0; i <= kMax; ++i) {
      for (int j = 0; i + j <= kMax; ++j) {
        if (i + j > r.order) continue;
        if (axis == 0 && i + 1 <= kMax) r.c[i][j] = (i + 1) * c[i + 1][j];
        if (axis == 1 && j + 1 <= kMax) r.c[i][j] = (j + 1) * c[i][j + 1];
      }
    }
    return r;
  }
};

inline Jet operator+(const Jet& a, const Jet& b) {
  Jet r;
  r.order = std::min(a.order, b.order);
  for (int i = 0; i <= kMax; ++i)
    for (int j = 0; i + j <= kMax; ++j) r.c[i][j] = a.c[i][j] + b.c[i][j];
  return r;
}
inline Jet operator-(const Jet& a) {
  Jet r = a;
  for (auto& row : r.c)
    for (double& v : row) v = -v;
  return r;
}
inline Jet operator-(const Jet& a, const Jet& b) { return a + (-b); }
inline Jet operator*(const Jet& a, const Jet& b) {
  Jet r;
  r.order = std::min(a.order, b.order);
  for (int i = 0; i <= kMax; ++i) {
    for (int j = 0; i + j <= r.order; ++j) {
      double s = 0.0;
      for (int p = 0; p <= i; ++p)
        for (int q = 0; q <= j; ++q) s += a.c[p][q] * b.c[i - p][j - q];
      r.c[i][j] = s;
    }
  }
  return r;
}

// f(a) from the derivatives f^(k)(a0) / k!, k = 0..kMax.
inline Jet compose(const Jet& a, const std::array<double, kMax + 1>& taylor) {
  Jet delta = a;
  delta.c[0][0] = 0.0;
  Jet r(taylor[0]);
  r.order = a.order;
  Jet pw(1.0);
  for (int k = 1; k <= kMax; ++k) {
    pw = pw * delta;
    for (int i = 0; i <= kMax; ++i)
      for (int j = 0; i + j <= kMax; ++j) r.c[i][j] += taylor[static_cast<std::size_t>(k)] * pw.c[i][j];
  }
  r.order = a.order;
  return r;
}

inline Jet sin(const Jet& a) {
  const double s = std::sin(a.value()), co = std::cos(a.value());
  return compose(a, {s, co, -s / 2.0, -co / 6.0, s / 24.0});
}
inline Jet cos(const Jet& a) {
  const double s = std::sin(a.value()), co = std::cos(a.value());
  return compose(a, {co, -s, -co / 2.0, s / 6.0, co / 24.0});
}
inline Jet exp(const Jet& a) {
  const double e = std::exp(a.value());
  return compose(a, {e, e, e / 2.0, e / 6.0, e / 24.0});
}
inline Jet sqrt(const Jet& a) {
  const double v = a.value(), s = std::sqrt(v);
  return compose(a, {s, 0.5 / s, -0.125 / (s * v), 1.0 / 16.0 / (s * v * v), -5.0 / 128.0 / (s * v * v * v)});
}
inline Jet inverse(const Jet& a) {
  const double v = a.value();
  return compose(a, {1.0 / v, -1.0 / (v * v), 1.0 / (v * v * v), -1.0 / (v * v * v * v), 1.0 / (v * v * v * v * v)});
}
inline Jet operator/(const Jet& a, const Jet& b) { return a * inverse(b); }

}  // namespace jet
