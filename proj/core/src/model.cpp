#include "riemdiff/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "riemdiff/error.hpp"
#include "riemdiff/operators.hpp"

namespace riemdiff {

namespace {

void bind_node(EvalContext& ctx, const ChartGrid& grid, std::size_t node) {
  ctx.set("x1", grid.x(node, 0));
  ctx.set("x2", grid.dim() == 2 ? grid.x(node, 1) : 0.0);
}

// Spectral norm of a d x d row-major matrix, d in {1,2}.
double op_norm(std::span<const double> m, int d) {
  if (d == 1) return std::abs(m[0]);
  const double a = m[0] * m[0] + m[2] * m[2];
  const double b = m[0] * m[1] + m[2] * m[3];
  const double c = m[1] * m[1] + m[3] * m[3];
  const std::array<double, 4> mtm = {a, b, b, c};
  return std::sqrt(std::max(0.0, symmetric_eigenvalues(mtm, 2)[1]));
}

XiTable transpose_table(const XiTable& s, const MetricField& metric) {
  XiTable out(s.grid(), s.xi(), s.components());
  for (std::size_t node = 0; node < s.grid().size(); ++node) {
    for (int e = 0; e < s.xi().edges(); ++e) transpose_at(metric, node, s.at(node, e), out.at(node, e));
  }
  return out;
}

XiTable gram_table(const XiTable& sigma, const XiTable& sigma_t, int d) {
  XiTable out(sigma.grid(), sigma.xi(), sigma.components());
  for (std::size_t node = 0; node < sigma.grid().size(); ++node) {
    for (int e = 0; e < sigma.xi().edges(); ++e) {
      auto s = sigma.at(node, e);
      auto st = sigma_t.at(node, e);
      auto a = out.at(node, e);
      for (int k = 0; k < d; ++k) {
        for (int i = 0; i < d; ++i) {
          double v = 0.0;
          for (int m = 0; m < d; ++m) v += st[k * d + m] * s[m * d + i];
          a[k * d + i] = v;
        }
      }
    }
  }
  return out;
}

XiTable checked_sigma(XiTable sigma, const MetricField& metric) {
  if (!(sigma.grid() == metric.grid())) throw ConfigError("sigma table and metric use different grids");
  if (sigma.components() != metric.dim() * metric.dim()) throw ConfigError("sigma table must have d*d components");
  for (double v : sigma.values()) {
    if (!std::isfinite(v)) throw ConfigError("sigma has non-finite samples");
  }
  return sigma;
}

}  // namespace

void sample_expression(const Expr& e, XiTable& table, int c) {
  const ChartGrid& grid = table.grid();
  const XiGrid& xi = table.xi();
  EvalContext ctx{{"x1", 0.0}, {"x2", 0.0}, {"xi", 0.0}, {"t", 0.0}};
  const bool xi_dependent = e.references("xi");
  for (std::size_t node = 0; node < grid.size(); ++node) {
    bind_node(ctx, grid, node);
    if (!xi_dependent) {
      const double v = e.eval(ctx);
      for (int b = 0; b < xi.edges(); ++b) table(node, b, c) = v;
      continue;
    }
    for (int b = 0; b < xi.edges(); ++b) {
      ctx.set("xi", xi.edge(b));
      table(node, b, c) = e.eval(ctx);
    }
  }
}

ScalarField sample_expression(const Expr& e, const ChartGrid& grid) {
  ScalarField out(grid);
  EvalContext ctx{{"x1", 0.0}, {"x2", 0.0}, {"xi", 0.0}, {"t", 0.0}};
  for (std::size_t node = 0; node < grid.size(); ++node) {
    bind_node(ctx, grid, node);
    out(node) = e.eval(ctx);
  }
  return out;
}

DiffusionModel::DiffusionModel(const MetricField& metric, XiTable sigma)
    : sigma_(checked_sigma(std::move(sigma), metric)),
      a_(gram_table(sigma_, transpose_table(sigma_, metric), metric.dim())),
      beta_(transpose_table(sigma_, metric)) {
  for (double v : sigma_.values()) {
    if (v != 0.0) zero_ = false;
  }
  const int d = metric.dim();
  const XiTable& ap = a_.integrand();
  for (std::size_t node = 0; node < grid().size(); ++node) {
    for (int e = 0; e < xi().edges(); ++e) max_norm_ = std::max(max_norm_, op_norm(ap.at(node, e), d));
  }
}

DiffusionModel DiffusionModel::from_expressions(const TensorExprs& sigma, const MetricField& metric,
                                                const XiGrid& xi) {
  const int d = metric.dim();
  XiTable table(metric.grid(), xi, d * d);
  for (int k = 0; k < d; ++k) {
    for (int i = 0; i < d; ++i) {
      const Expr& e = sigma[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
      if (e.empty()) continue;
      sample_expression(e, table, k * d + i);
    }
  }
  return DiffusionModel(metric, std::move(table));
}

DiffusionModel DiffusionModel::zero(const MetricField& metric, const XiGrid& xi) {
  return DiffusionModel(metric, XiTable(metric.grid(), xi, metric.dim() * metric.dim()));
}

void DiffusionModel::a_prime_at(std::size_t node, double xi, std::span<double> out) const noexcept {
  a_.integrand().interp(node, xi, out);
}

XiPrimitive DiffusionModel::beta_psi(const XiFunction& psi) const {
  XiTable q = sigma_t();
  const int nc = q.components();
  std::vector<double> w(static_cast<std::size_t>(xi().edges()));
  for (int e = 0; e < xi().edges(); ++e) {
    const double p = psi(xi().edge(e));
    if (!(p >= 0.0)) throw ConfigError("psi must be nonnegative on [0,1]");
    w[static_cast<std::size_t>(e)] = std::sqrt(p);
  }
  for (std::size_t node = 0; node < grid().size(); ++node) {
    for (int e = 0; e < xi().edges(); ++e) {
      for (int c = 0; c < nc; ++c) q(node, e, c) *= w[static_cast<std::size_t>(e)];
    }
  }
  return XiPrimitive(std::move(q));
}

FluxModel::FluxModel(VectorField f0, XiTable f_prime) : f0_(std::move(f0)), increment_(std::move(f_prime)) {
  if (!(f0_.grid() == increment_.grid()) || increment_.components() != f0_.components()) {
    throw ConfigError("flux tables have inconsistent shapes");
  }
}

FluxModel FluxModel::from_expressions(const VectorExprs& f, const std::optional<VectorExprs>& df,
                                      const ChartGrid& grid, const XiGrid& xi) {
  const int d = grid.dim();
  XiTable values(grid, xi, d);
  XiTable prime(grid, xi, d);
  for (int k = 0; k < d; ++k) {
    const Expr& fk = f[static_cast<std::size_t>(k)];
    if (!fk.empty()) sample_expression(fk, values, k);
  }
  bool analytic = df.has_value();
  if (analytic) {
    for (int k = 0; k < d; ++k) analytic = analytic && !(*df)[static_cast<std::size_t>(k)].empty();
  }
  if (analytic) {
    for (int k = 0; k < d; ++k) sample_expression((*df)[static_cast<std::size_t>(k)], prime, k);
  } else {
    const int last = xi.bins();
    const double inv = 0.5 / xi.step();
    for (std::size_t node = 0; node < grid.size(); ++node) {
      for (int k = 0; k < d; ++k) {
        prime(node, 0, k) = (-3.0 * values(node, 0, k) + 4.0 * values(node, 1, k) - values(node, 2, k)) * inv;
        for (int e = 1; e < last; ++e) prime(node, e, k) = (values(node, e + 1, k) - values(node, e - 1, k)) * inv;
        prime(node, last, k) =
            (3.0 * values(node, last, k) - 4.0 * values(node, last - 1, k) + values(node, last - 2, k)) * inv;
      }
    }
  }
  return FluxModel(values.slice<FieldKind::vector>(0), std::move(prime));
}

FluxModel FluxModel::zero(const ChartGrid& grid, const XiGrid& xi) {
  return FluxModel(VectorField(grid), XiTable(grid, xi, grid.dim()));
}

void FluxModel::flux_at(std::size_t node, double xi, std::span<double> out) const noexcept {
  increment_.eval(node, xi, out);
  auto base = f0_.at(node);
  for (std::size_t c = 0; c < out.size(); ++c) out[c] += base[c];
}

VectorField FluxModel::at_xi(double xi) const {
  VectorField f(grid());
  for (std::size_t node = 0; node < grid().size(); ++node) flux_at(node, xi, f.at(node));
  return f;
}

VectorField FluxModel::compose(const ScalarField& u) const {
  VectorField f(grid());
  for (std::size_t node = 0; node < grid().size(); ++node) flux_at(node, u(node), f.at(node));
  return f;
}

FluxModel FluxModel::shifted(const VectorField& offset) const {
  VectorField f0 = f0_;
  f0 += offset;
  return FluxModel(std::move(f0), f_prime());
}

double FluxModel::max_f_prime_norm(const MetricField& metric) const {
  const int d = metric.dim();
  const XiTable& fp = f_prime();
  double m = 0.0;
  for (std::size_t node = 0; node < grid().size(); ++node) {
    for (int e = 0; e < xi().edges(); ++e) {
      auto v = fp.at(node, e);
      double s = 0.0;
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) s += metric.g(node, i, j) * v[i] * v[j];
      }
      m = std::max(m, std::sqrt(s));
    }
  }
  return m;
}

FluxModel make_compatible_flux(const DiffusionModel& dm, const MetricField& metric, const Expr* stream) {
  const ChartGrid& grid = metric.grid();
  const XiGrid& xi = dm.xi();
  const int d = grid.dim();
  if (stream != nullptr && d != 2) throw ConfigError("a stream function requires d = 2");

  XiTable prime(grid, xi, d);
  for (int e = 0; e < xi.edges(); ++e) {
    const auto ap = dm.a_prime().slice<FieldKind::tensor11>(e);
    prime.set_slice(e, sharp(div_tensor11(ap, metric), metric));
  }

  VectorField f0(grid);
  if (stream != nullptr) {
    XiTable psi(grid, xi, 1);
    sample_expression(*stream, psi, 0);
    XiTable w(grid, xi, 2);
    for (int e = 0; e < xi.edges(); ++e) {
      const auto dpsi = differential(psi.slice<FieldKind::scalar>(e));
      for (std::size_t node = 0; node < grid.size(); ++node) {
        w(node, e, 0) = -dpsi(node, 1) / metric.sqrt_det(node);
        w(node, e, 1) = dpsi(node, 0) / metric.sqrt_det(node);
      }
    }
    f0 = w.slice<FieldKind::vector>(0);
    if (stream->references("xi")) {
      const int last = xi.bins();
      const double inv = 0.5 / xi.step();
      for (std::size_t node = 0; node < grid.size(); ++node) {
        for (int k = 0; k < 2; ++k) {
          prime(node, 0, k) += (-3.0 * w(node, 0, k) + 4.0 * w(node, 1, k) - w(node, 2, k)) * inv;
          for (int e = 1; e < last; ++e) prime(node, e, k) += (w(node, e + 1, k) - w(node, e - 1, k)) * inv;
          prime(node, last, k) += (3.0 * w(node, last, k) - 4.0 * w(node, last - 1, k) + w(node, last - 2, k)) * inv;
        }
      }
    }
  }
  return FluxModel(std::move(f0), std::move(prime));
}

ScalarField compat_field(const FluxModel& fm, const DiffusionModel& dm, const MetricField& metric, double xi) {
  ScalarField r = div_vector(fm.at_xi(xi), metric);
  r -= divdiv_tensor11(dm.a().at_xi<FieldKind::tensor11>(xi), metric);
  return r;
}

CompatResidual compat_residual(const FluxModel& fm, const DiffusionModel& dm, const MetricField& metric, double xi) {
  const ScalarField r = compat_field(fm, dm, metric, xi);
  CompatResidual out;
  out.xi = xi;
  for (std::size_t node = 0; node < r.size(); ++node) {
    if (std::abs(r(node)) > out.linf) {
      out.linf = std::abs(r(node));
      out.argmax = node;
    }
  }
  out.l1 = integrate_abs(r, metric);
  return out;
}

double compat_scale(const FluxModel& fm, const DiffusionModel& dm, const MetricField& metric,
                    std::span<const double> xis) {
  double m = 0.0;
  for (double xi : xis) {
    m = std::max(m, max_abs(div_vector(fm.at_xi(xi), metric)));
    m = std::max(m, max_abs(divdiv_tensor11(dm.a().at_xi<FieldKind::tensor11>(xi), metric)));
  }
  return 1.0 + m;
}

PsdAudit psd_audit(const DiffusionModel& dm, const MetricField& metric, int n_dirs, std::uint64_t seed) {
  const int d = metric.dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  PsdAudit out;
  out.min_value = std::numeric_limits<double>::infinity();
  const XiTable& ap = dm.a_prime();
  std::array<double, 2> v{};
  std::array<double, 2> av{};
  for (std::size_t node = 0; node < metric.grid().size(); ++node) {
    for (int e = 0; e < dm.xi().edges(); ++e) {
      auto a = ap.at(node, e);
      for (int r = 0; r < n_dirs; ++r) {
        for (int i = 0; i < d; ++i) v[static_cast<std::size_t>(i)] = dist(rng);
        for (int k = 0; k < d; ++k) {
          double s = 0.0;
          for (int i = 0; i < d; ++i) s += a[k * d + i] * v[static_cast<std::size_t>(i)];
          av[static_cast<std::size_t>(k)] = s;
        }
        double q = 0.0;
        for (int i = 0; i < d; ++i) {
          for (int j = 0; j < d; ++j) {
            q += metric.g(node, i, j) * av[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)];
          }
        }
        ++out.samples;
        if (q < out.min_value) {
          out.min_value = q;
          out.node = node;
          out.edge = e;
        }
      }
    }
  }
  if (out.samples == 0) out.min_value = 0.0;
  return out;
}

}  // namespace riemdiff
