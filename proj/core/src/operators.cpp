#include "riemdiff/operators.hpp"

#include <array>
#include <cmath>

namespace riemdiff {

namespace {

// Central difference of component c of a field along `axis` at `node`.
template <FieldKind K>
double dc(const Field<K>& f, std::size_t node, int axis, int c, double inv2h) {
  const ChartGrid& g = f.grid();
  return (f(g.shift(node, axis, 1), c) - f(g.shift(node, axis, -1), c)) * inv2h;
}

}  // namespace

OneFormField differential(const ScalarField& v) {
  const ChartGrid& grid = v.grid();
  const int d = grid.dim();
  const double inv = 0.5 / grid.h();
  OneFormField out(grid);
  for (std::size_t node = 0; node < grid.size(); ++node) {
    for (int i = 0; i < d; ++i) out(node, i) = dc(v, node, i, 0, inv);
  }
  return out;
}

VectorField gradient(const ScalarField& v, const MetricField& metric) {
  return sharp(differential(v), metric);
}

ScalarField div_vector(const VectorField& x, const MetricField& metric) {
  const ChartGrid& grid = x.grid();
  const int d = grid.dim();
  const double inv = 0.5 / grid.h();
  ScalarField out(grid);
  for (std::size_t node = 0; node < grid.size(); ++node) {
    double s = 0.0;
    for (int k = 0; k < d; ++k) {
      const std::size_t p = grid.shift(node, k, 1);
      const std::size_t m = grid.shift(node, k, -1);
      s += (metric.sqrt_det(p) * x(p, k) - metric.sqrt_det(m) * x(m, k)) * inv;
    }
    out(node) = s / metric.sqrt_det(node);
  }
  return out;
}

ScalarField div_oneform(const OneFormField& w, const MetricField& metric) {
  const ChartGrid& grid = w.grid();
  const int d = grid.dim();
  const double inv = 0.5 / grid.h();
  ScalarField out(grid);
  for (std::size_t node = 0; node < grid.size(); ++node) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        const double gij = metric.ginv(node, i, j);
        s += gij * dc(w, node, i, j, inv);
        for (int k = 0; k < d; ++k) s -= metric.christoffel(node, k, i, j) * gij * w(node, k);
      }
    }
    out(node) = s;
  }
  return out;
}

OneFormField div_tensor11(const Tensor11Field& t, const MetricField& metric) {
  const ChartGrid& grid = t.grid();
  const int d = grid.dim();
  const double inv = 0.5 / grid.h();
  OneFormField out(grid);
  for (std::size_t node = 0; node < grid.size(); ++node) {
    for (int i = 0; i < d; ++i) {
      double s = 0.0;
      for (int j = 0; j < d; ++j) {
        s += dc(t, node, j, j * d + i, inv);
        s += metric.contracted(node, j) * t(node, j, i);
        for (int l = 0; l < d; ++l) s -= metric.christoffel(node, l, j, i) * t(node, j, l);
      }
      out(node, i) = s;
    }
  }
  return out;
}

ScalarField divdiv_tensor11(const Tensor11Field& t, const MetricField& metric) {
  const ChartGrid& grid = t.grid();
  const int d = grid.dim();
  const int dd = d * d;
  const double h = grid.h();
  const double inv = 0.5 / h;
  const double inv_h2 = 1.0 / (h * h);
  const double inv_4h2 = 0.25 * inv_h2;
  ScalarField out(grid);

  // per node: first derivatives D[a][c] and second derivatives D2[a][b][c]
  std::array<std::array<double, 4>, 2> D{};
  std::array<std::array<std::array<double, 4>, 2>, 2> D2{};
  for (std::size_t node = 0; node < grid.size(); ++node) {
    std::array<std::size_t, 2> p{}, m{};
    for (int a = 0; a < d; ++a) {
      p[a] = grid.shift(node, a, 1);
      m[a] = grid.shift(node, a, -1);
    }
    for (int a = 0; a < d; ++a) {
      for (int c = 0; c < dd; ++c) {
        D[a][c] = (t(p[a], c) - t(m[a], c)) * inv;
        D2[a][a][c] = (t(p[a], c) - 2.0 * t(node, c) + t(m[a], c)) * inv_h2;
      }
    }
    if (d == 2) {
      const std::size_t pp = grid.shift(p[0], 1, 1), pm = grid.shift(p[0], 1, -1);
      const std::size_t mp = grid.shift(m[0], 1, 1), mm = grid.shift(m[0], 1, -1);
      for (int c = 0; c < dd; ++c) {
        D2[0][1][c] = D2[1][0][c] = (t(pp, c) - t(pm, c) - t(mp, c) + t(mm, c)) * inv_4h2;
      }
    }

    double total = 0.0;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int k = 0; k < d; ++k) s += D2[i][k][k * d + j];
        // Gamma^k_kl d_i T^l_j + (d_i Gamma^k_kl) T^l_j
        for (int l = 0; l < d; ++l) {
          s += metric.contracted(node, l) * D[i][l * d + j];
          s += metric.dcontracted(node, i, l) * t(node, l, j);
        }
        for (int k = 0; k < d; ++k) {
          const double gk = metric.christoffel(node, k, i, j);
          for (int l = 0; l < d; ++l) {
            // - Gamma^l_kj d_i T^k_l - (d_i Gamma^l_kj) T^k_l
            s -= metric.christoffel(node, l, k, j) * D[i][k * d + l];
            s -= metric.dchristoffel(node, i, l, k, j) * t(node, k, l);
            // - Gamma^k_ij d_l T^l_k
            s -= gk * D[l][l * d + k];
            // - Gamma^k_ij Gamma^l_lr T^r_k + Gamma^k_ij Gamma^r_kl T^l_r
            s -= gk * metric.contracted(node, l) * t(node, l, k);
            for (int r = 0; r < d; ++r) s += gk * metric.christoffel(node, r, k, l) * t(node, l, r);
          }
        }
        total += metric.ginv(node, i, j) * s;
      }
    }
    out(node) = total;
  }
  return out;
}

ScalarField laplace_beltrami(const ScalarField& v, const MetricField& metric) {
  const ChartGrid& grid = v.grid();
  const int d = grid.dim();
  const double h = grid.h();
  const double inv_h2 = 1.0 / (h * h);
  ScalarField out(grid);

  // nodal sqrt|g| g^ij
  auto k_at = [&](std::size_t node, int i, int j) { return metric.sqrt_det(node) * metric.ginv(node, i, j); };

  for (std::size_t node = 0; node < grid.size(); ++node) {
    double s = 0.0;
    for (int a = 0; a < d; ++a) {
      const std::size_t p = grid.shift(node, a, 1);
      const std::size_t m = grid.shift(node, a, -1);
      const double kp = 0.5 * (k_at(node, a, a) + k_at(p, a, a));
      const double km = 0.5 * (k_at(node, a, a) + k_at(m, a, a));
      s += (kp * (v(p) - v(node)) - km * (v(node) - v(m))) * inv_h2;
    }
    out(node) = s;
  }

  if (d == 2) {
    // Cell c has lower-left corner node c; D1, D2 at the cell centre.
    const double inv2h = 0.5 / h;
    ScalarField k12(grid), d1(grid), d2(grid);
    for (std::size_t c = 0; c < grid.size(); ++c) {
      const std::size_t c10 = grid.shift(c, 0, 1);
      const std::size_t c01 = grid.shift(c, 1, 1);
      const std::size_t c11 = grid.shift(c10, 1, 1);
      k12(c) = 0.25 * (k_at(c, 0, 1) + k_at(c10, 0, 1) + k_at(c01, 0, 1) + k_at(c11, 0, 1));
      d1(c) = (v(c10) + v(c11) - v(c) - v(c01)) * inv2h;
      d2(c) = (v(c01) + v(c11) - v(c) - v(c10)) * inv2h;
    }
    for (std::size_t node = 0; node < grid.size(); ++node) {
      const std::size_t cm0 = grid.shift(node, 0, -1);
      const std::array<std::size_t, 4> cells = {node, cm0, grid.shift(node, 1, -1), grid.shift(cm0, 1, -1)};
      // sign of the node's offset inside each cell, per axis
      constexpr std::array<double, 4> s1 = {-1.0, 1.0, -1.0, 1.0};
      constexpr std::array<double, 4> s2 = {-1.0, -1.0, 1.0, 1.0};
      double s = 0.0;
      for (std::size_t q = 0; q < 4; ++q) {
        const std::size_t c = cells[q];
        s += k12(c) * (s1[q] * d2(c) + s2[q] * d1(c));
      }
      out(node) -= s * inv2h;
    }
  }

  for (std::size_t node = 0; node < grid.size(); ++node) out(node) /= metric.sqrt_det(node);
  return out;
}

void transpose_at(const MetricField& metric, std::size_t node, std::span<const double> t,
                  std::span<double> out) noexcept {
  const int d = metric.dim();
  for (int k = 0; k < d; ++k) {
    for (int i = 0; i < d; ++i) {
      double s = 0.0;
      for (int l = 0; l < d; ++l) {
        for (int m = 0; m < d; ++m) s += metric.ginv(node, k, l) * t[m * d + l] * metric.g(node, m, i);
      }
      out[k * d + i] = s;
    }
  }
}

Tensor11Field transpose11(const Tensor11Field& t, const MetricField& metric) {
  Tensor11Field out(t.grid());
  for (std::size_t node = 0; node < t.size(); ++node) transpose_at(metric, node, t.at(node), out.at(node));
  return out;
}

ScalarField oneform_norm_sq(const OneFormField& w, const MetricField& metric) {
  const int d = w.grid().dim();
  ScalarField out(w.grid());
  for (std::size_t node = 0; node < w.size(); ++node) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) s += metric.ginv(node, i, j) * w(node, i) * w(node, j);
    }
    out(node) = s;
  }
  return out;
}

double integrate(const ScalarField& v, const MetricField& metric) {
  double s = 0.0;
  for (std::size_t node = 0; node < v.size(); ++node) s += v(node) * metric.sqrt_det(node);
  return s * v.grid().cell_volume();
}

double integrate_abs(const ScalarField& v, const MetricField& metric) {
  double s = 0.0;
  for (std::size_t node = 0; node < v.size(); ++node) s += std::abs(v(node)) * metric.sqrt_det(node);
  return s * v.grid().cell_volume();
}

VectorField sharp(const OneFormField& w, const MetricField& metric) {
  const int d = w.grid().dim();
  VectorField out(w.grid());
  for (std::size_t node = 0; node < w.size(); ++node) {
    for (int j = 0; j < d; ++j) {
      double s = 0.0;
      for (int i = 0; i < d; ++i) s += metric.ginv(node, i, j) * w(node, i);
      out(node, j) = s;
    }
  }
  return out;
}

OneFormField flat(const VectorField& x, const MetricField& metric) {
  const int d = x.grid().dim();
  OneFormField out(x.grid());
  for (std::size_t node = 0; node < x.size(); ++node) {
    for (int i = 0; i < d; ++i) {
      double s = 0.0;
      for (int j = 0; j < d; ++j) s += metric.g(node, i, j) * x(node, j);
      out(node, i) = s;
    }
  }
  return out;
}

}  // namespace riemdiff
