#include "riemdiff/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "riemdiff/error.hpp"

namespace riemdiff {

namespace {

MetricSpec diagonal_spec(std::string name, std::string_view g11, std::string_view g22) {
  MetricSpec spec;
  spec.name = std::move(name);
  spec.g[0][0] = Expr::parse(g11);
  spec.g[1][1] = Expr::parse(g22);
  spec.g[0][1] = Expr::parse("0");
  spec.g[1][0] = Expr::parse("0");
  return spec;
}

// Central difference of a node-major table with `stride` entries per node.
void central_difference(const ChartGrid& grid, const std::vector<double>& src, std::size_t stride,
                        int axis, std::vector<double>& out) {
  const double inv = 0.5 / grid.h();
  out.resize(src.size());
  for (std::size_t node = 0; node < grid.size(); ++node) {
    const std::size_t p = grid.shift(node, axis, 1);
    const std::size_t m = grid.shift(node, axis, -1);
    for (std::size_t c = 0; c < stride; ++c) {
      out[node * stride + c] = (src[p * stride + c] - src[m * stride + c]) * inv;
    }
  }
}

}  // namespace

MetricSpec metric_catalog(std::string_view name, int dim) {
  if (name == "euclidean") {
    return diagonal_spec("euclidean", "1", "1");
  }
  if (name == "curved1d") {
    if (dim != 1) throw ConfigError("metric 'curved1d' requires d = 1");
    return diagonal_spec("curved1d", "(1 + 0.5*sin(2*pi*x1))^2", "1");
  }
  if (name == "diag2d") {
    if (dim != 2) throw ConfigError("metric 'diag2d' requires d = 2");
    return diagonal_spec("diag2d", "1 + 0.3*cos(2*pi*x1)", "1 + 0.3*cos(2*pi*x2)");
  }
  if (name == "warped2d") {
    if (dim != 2) throw ConfigError("metric 'warped2d' requires d = 2");
    MetricSpec spec;
    spec.name = "warped2d";
    spec.g[0][0] = Expr::parse("1.2 + 0.3*sin(2*pi*x2) + 0.1*cos(2*pi*x1)");
    spec.g[1][1] = Expr::parse("1 + 0.25*cos(2*pi*x1)");
    spec.g[0][1] = Expr::parse("0.2*sin(2*pi*(x1 + x2))");
    spec.g[1][0] = spec.g[0][1];
    return spec;
  }
  throw ConfigError("unknown metric '" + std::string(name) + "'");
}

std::vector<std::string> metric_catalog_names() { return {"euclidean", "curved1d", "diag2d", "warped2d"}; }

std::array<double, 2> symmetric_eigenvalues(std::span<const double> m, int dim) noexcept {
  if (dim == 1) return {m[0], m[0]};
  const double a = m[0];
  const double b = m[1];
  const double c = m[3];
  const double mean = 0.5 * (a + c);
  const double rad = std::hypot(0.5 * (a - c), b);
  return {mean - rad, mean + rad};
}

MetricField::MetricField(const ChartGrid& grid, std::vector<double> g, double lambda_min)
    : grid_(grid),
      d_(static_cast<std::size_t>(grid.dim())),
      d2_(d_ * d_),
      d3_(d_ * d_ * d_),
      lambda_min_(lambda_min),
      g_(std::move(g)) {
  const std::size_t n = grid.size();
  const int d = grid.dim();
  if (g_.size() != n * d2_) throw ConfigError("metric sample table has the wrong size");

  ginv_.resize(n * d2_);
  sqrtg_.resize(n);
  min_eig_ = std::numeric_limits<double>::infinity();
  max_inv_eig_ = 0.0;
  for (std::size_t node = 0; node < n; ++node) {
    const double* gn = &g_[node * d2_];
    for (std::size_t i = 0; i < d2_; ++i) {
      if (!std::isfinite(gn[i])) {
        throw MetricError("non-finite metric entry at node " + std::to_string(node), node);
      }
    }
    if (d == 2 && gn[1] != gn[2]) {
      throw MetricError("metric not symmetric at node " + std::to_string(node), node);
    }
    const auto eig = symmetric_eigenvalues({gn, d2_}, d);
    if (!(eig[0] >= lambda_min)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "metric not positive definite at node " << node << " (x1=" << grid.x(node, 0);
      if (d == 2) msg << ", x2=" << grid.x(node, 1);
      msg << "): eigenvalues " << eig[0];
      if (d == 2) msg << ", " << eig[1];
      msg << " (lambda_min " << lambda_min << ")";
      throw MetricError(msg.str(), node);
    }
    min_eig_ = std::min(min_eig_, eig[0]);
    max_inv_eig_ = std::max(max_inv_eig_, 1.0 / eig[0]);

    double* gi = &ginv_[node * d2_];
    double det = 0.0;
    if (d == 1) {
      det = gn[0];
      gi[0] = 1.0 / gn[0];
    } else {
      det = gn[0] * gn[3] - gn[1] * gn[2];
      gi[0] = gn[3] / det;
      gi[1] = -gn[1] / det;
      gi[2] = -gn[2] / det;
      gi[3] = gn[0] / det;
    }
    sqrtg_[node] = std::sqrt(det);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int k = 0; k < d; ++k) s += gn[i * d + k] * gi[k * d + j];
        if (std::abs(s - (i == j ? 1.0 : 0.0)) > 1e-12) {
          throw MetricError("metric inverse inaccurate at node " + std::to_string(node), node);
        }
      }
    }
  }

  // dg[l] holds d_l g_ij.
  std::vector<std::vector<double>> dg(d_);
  for (int l = 0; l < d; ++l) central_difference(grid, g_, d2_, l, dg[static_cast<std::size_t>(l)]);

  gamma_.assign(n * d3_, 0.0);
  for (std::size_t node = 0; node < n; ++node) {
    auto dgl = [&](int l, int i, int j) { return dg[static_cast<std::size_t>(l)][node * d2_ + i * d + j]; };
    for (int k = 0; k < d; ++k) {
      for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
          double s = 0.0;
          for (int l = 0; l < d; ++l) {
            s += ginv(node, k, l) * (dgl(i, j, l) + dgl(j, i, l) - dgl(l, i, j));
          }
          s *= 0.5;
          gamma_[node * d3_ + k * d2_ + i * d_ + j] = s;
          gamma_[node * d3_ + k * d2_ + j * d_ + i] = s;
        }
      }
    }
  }

  dgamma_.assign(n * d3_ * d_, 0.0);
  std::vector<double> tmp;
  for (int l = 0; l < d; ++l) {
    central_difference(grid, gamma_, d3_, l, tmp);
    for (std::size_t node = 0; node < n; ++node) {
      std::copy_n(&tmp[node * d3_], d3_, &dgamma_[node * d3_ * d_ + static_cast<std::size_t>(l) * d3_]);
    }
  }

  contracted_.assign(n * d_, 0.0);
  {
    const double inv = 0.5 / grid.h();
    for (std::size_t node = 0; node < n; ++node) {
      for (int k = 0; k < d; ++k) {
        const double ds = sqrtg_[grid.shift(node, k, 1)] - sqrtg_[grid.shift(node, k, -1)];
        contracted_[node * d_ + static_cast<std::size_t>(k)] = ds * inv / sqrtg_[node];
      }
    }
  }
  dcontracted_.assign(n * d2_, 0.0);
  for (int l = 0; l < d; ++l) {
    central_difference(grid, contracted_, d_, l, tmp);
    for (std::size_t node = 0; node < n; ++node) {
      std::copy_n(&tmp[node * d_], d_, &dcontracted_[node * d2_ + static_cast<std::size_t>(l) * d_]);
    }
  }
}

double MetricField::volume() const noexcept {
  double s = 0.0;
  for (double v : sqrtg_) s += v;
  return s * grid_.cell_volume();
}

MetricField build_metric(const MetricSpec& spec, const ChartGrid& grid, double lambda_min) {
  const int d = grid.dim();
  const std::size_t d2 = static_cast<std::size_t>(d * d);
  std::vector<double> g(grid.size() * d2);
  EvalContext ctx{{"x1", 0.0}, {"x2", 0.0}};
  for (std::size_t node = 0; node < grid.size(); ++node) {
    ctx.set("x1", grid.x(node, 0));
    ctx.set("x2", d == 2 ? grid.x(node, 1) : 0.0);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        const Expr& e = spec.g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (e.empty()) throw ConfigError("metric entry g" + std::to_string(i + 1) + std::to_string(j + 1) + " missing");
        g[node * d2 + static_cast<std::size_t>(i * d + j)] = e.eval(ctx);
      }
    }
    if (d == 2 && g[node * d2 + 1] != g[node * d2 + 2]) {
      throw MetricError("metric expression table not symmetric at node " + std::to_string(node), node);
    }
  }
  return MetricField(grid, std::move(g), lambda_min);
}

MetricIdentityResiduals metric_identity_residuals(const MetricField& metric) {
  const ChartGrid& grid = metric.grid();
  const int d = grid.dim();
  const double inv = 0.5 / grid.h();
  MetricIdentityResiduals r;
  for (std::size_t node = 0; node < grid.size(); ++node) {
    for (int k = 0; k < d; ++k) {
      const std::size_t p = grid.shift(node, k, 1);
      const std::size_t m = grid.shift(node, k, -1);
      const double dsqrt = (metric.sqrt_det(p) - metric.sqrt_det(m)) * inv;
      double trace = 0.0;
      for (int s = 0; s < d; ++s) trace += metric.christoffel(node, s, k, s);
      r.sqrt_det = std::max(r.sqrt_det, std::abs(dsqrt - trace * metric.sqrt_det(node)));
    }
    for (int i = 0; i < d; ++i) {
      double s = 0.0;
      for (int j = 0; j < d; ++j) {
        const std::size_t p = grid.shift(node, j, 1);
        const std::size_t m = grid.shift(node, j, -1);
        s += (metric.ginv(p, i, j) - metric.ginv(m, i, j)) * inv;
        for (int a = 0; a < d; ++a) {
          s += metric.ginv(node, i, a) * metric.christoffel(node, j, a, j);
          s += metric.ginv(node, j, a) * metric.christoffel(node, i, j, a);
        }
      }
      r.inverse = std::max(r.inverse, std::abs(s));
    }
  }
  return r;
}

}  // namespace riemdiff
