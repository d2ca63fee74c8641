#pragma once

// Continuum Riemannian operators evaluated pointwise with Taylor jets. Used as
// the exact reference for the grid operators; formulas are the textbook
// Christoffel forms, written independently of the library.

#include <array>
#include <functional>

#include "jet.hpp"

namespace continuum {

using jet::Jet;
using Scalar = std::function<Jet(const Jet&, const Jet&)>;
using Table = std::array<std::array<Scalar, 2>, 2>;  // [row][col]
using Pair = std::array<Scalar, 2>;

struct Point {
  int d = 1;
  Jet x1, x2;
  std::array<std::array<Jet, 2>, 2> g, ginv;
  Jet sqrt_det;
  // gamma[k][i][j] = Gamma^k_ij
  std::array<std::array<std::array<Jet, 2>, 2>, 2> gamma;
};

inline Point at(int d, const Table& metric, double x1, double x2 = 0.0) {
  Point p;
  p.d = d;
  p.x1 = Jet::variable(x1, 0);
  p.x2 = Jet::variable(x2, 1);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) p.g[i][j] = metric[i][j](p.x1, p.x2);
  if (d == 1) {
    p.ginv[0][0] = jet::inverse(p.g[0][0]);
    p.sqrt_det = jet::sqrt(p.g[0][0]);
  } else {
    const Jet det = p.g[0][0] * p.g[1][1] - p.g[0][1] * p.g[1][0];
    const Jet inv = jet::inverse(det);
    p.ginv[0][0] = p.g[1][1] * inv;
    p.ginv[1][1] = p.g[0][0] * inv;
    p.ginv[0][1] = -(p.g[0][1] * inv);
    p.ginv[1][0] = -(p.g[1][0] * inv);
    p.sqrt_det = jet::sqrt(det);
  }
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        Jet s(0.0);
        for (int l = 0; l < d; ++l) s = s + p.ginv[k][l] * (p.g[j][l].d(i) + p.g[i][l].d(j) - p.g[i][j].d(l));
        p.gamma[k][i][j] = s * Jet(0.5);
      }
  return p;
}

inline Jet trace_gamma(const Point& p, int k) {
  Jet s(0.0);
  for (int j = 0; j < p.d; ++j) s = s + p.gamma[j][k][j];
  return s;
}

// (grad v)^j
inline std::array<Jet, 2> gradient(const Point& p, const Jet& v) {
  std::array<Jet, 2> out{Jet(0.0), Jet(0.0)};
  for (int j = 0; j < p.d; ++j)
    for (int i = 0; i < p.d; ++i) out[j] = out[j] + p.ginv[i][j] * v.d(i);
  return out;
}

inline Jet div_vector(const Point& p, const std::array<Jet, 2>& x) {
  Jet s(0.0);
  for (int k = 0; k < p.d; ++k) s = s + x[k].d(k) + trace_gamma(p, k) * x[k];
  return s;
}

inline Jet div_oneform(const Point& p, const std::array<Jet, 2>& w) {
  Jet s(0.0);
  for (int i = 0; i < p.d; ++i)
    for (int j = 0; j < p.d; ++j) {
      s = s + p.ginv[i][j] * w[j].d(i);
      for (int k = 0; k < p.d; ++k) s = s - p.gamma[k][i][j] * p.ginv[i][j] * w[k];
    }
  return s;
}

// t[k][i] = T^k_i
inline std::array<Jet, 2> div_tensor11(const Point& p, const std::array<std::array<Jet, 2>, 2>& t) {
  std::array<Jet, 2> out{Jet(0.0), Jet(0.0)};
  for (int i = 0; i < p.d; ++i)
    for (int j = 0; j < p.d; ++j) {
      out[i] = out[i] + t[j][i].d(j);
      for (int l = 0; l < p.d; ++l) {
        out[i] = out[i] + p.gamma[j][j][l] * t[l][i];
        out[i] = out[i] - p.gamma[l][j][i] * t[j][l];
      }
    }
  return out;
}

inline Jet divdiv(const Point& p, const std::array<std::array<Jet, 2>, 2>& t) {
  return div_oneform(p, div_tensor11(p, t));
}

inline Jet laplace_beltrami(const Point& p, const Jet& v) { return div_vector(p, gradient(p, v)); }

}  // namespace continuum
