#include "riemdiff/kinetic.hpp"

#include <algorithm>
#include <cmath>

#include "riemdiff/entropy.hpp"
#include "riemdiff/error.hpp"
#include "riemdiff/ledger.hpp"
#include "riemdiff/operators.hpp"

namespace riemdiff {

KineticFunction::KineticFunction(const ChartGrid& grid, const XiGrid& xi, double fill)
    : grid_(grid), xi_(xi), data_(grid.size() * static_cast<std::size_t>(xi.bins()), fill) {}

bool KineticFunction::admissible(double tol) const noexcept {
  const int nb = xi_.bins();
  for (std::size_t node = 0; node < grid_.size(); ++node) {
    for (int b = 0; b < nb; ++b) {
      const double v = (*this)(node, b);
      if (v < -tol || v > 1.0 + tol) return false;
      if (b > 0 && v > (*this)(node, b - 1) + tol) return false;
    }
  }
  return true;
}

KineticFunction chi_from_u(const ScalarField& u, const XiGrid& xi, double tolerance) {
  KineticFunction chi(u.grid(), xi);
  for (std::size_t node = 0; node < u.size(); ++node) {
    const double v = u(node);
    if (v < -tolerance) {
      throw ConfigError("kinetic function needs u >= 0, got " + std::to_string(v) + " at node " + std::to_string(node));
    }
    for (int b = 0; b < xi.bins() && xi.center(b) <= v; ++b) chi(node, b) = 1.0;
  }
  return chi;
}

ScalarField u_from_chi(const KineticFunction& chi) {
  return reconstruct([](double) { return 1.0; }, chi);
}

ScalarField reconstruct(const XiFunction& h_prime, const KineticFunction& chi) {
  const XiGrid& xi = chi.xi();
  std::vector<double> w(static_cast<std::size_t>(xi.bins()));
  for (int b = 0; b < xi.bins(); ++b) w[static_cast<std::size_t>(b)] = h_prime(xi.center(b));
  ScalarField out(chi.grid());
  for (std::size_t node = 0; node < out.size(); ++node) {
    double s = 0.0;
    for (int b = 0; b < xi.bins(); ++b) s += w[static_cast<std::size_t>(b)] * chi(node, b);
    out(node) = s * xi.step();
  }
  return out;
}

ScalarField reconstruct(const XiTable& h_prime, int c, const KineticFunction& chi) {
  const XiGrid& xi = chi.xi();
  ScalarField out(chi.grid());
  for (std::size_t node = 0; node < out.size(); ++node) {
    double s = 0.0;
    for (int b = 0; b < xi.bins(); ++b) s += 0.5 * (h_prime(node, b, c) + h_prime(node, b + 1, c)) * chi(node, b);
    out(node) = s * xi.step();
  }
  return out;
}

double contraction(const KineticFunction& chi, const KineticFunction& other, const MetricField& metric) {
  const XiGrid& xi = chi.xi();
  double total = 0.0;
  for (std::size_t node = 0; node < chi.grid().size(); ++node) {
    double s = 0.0;
    for (int b = 0; b < xi.bins(); ++b) s += chi(node, b) * (1.0 - other(node, b));
    total += s * metric.sqrt_det(node);
  }
  return total * xi.step() * chi.grid().cell_volume();
}

KineticFunction mollify_xi(const KineticFunction& chi, double delta) {
  const XiGrid& xi = chi.xi();
  const Kernel1D k = make_kernel(KernelShape::one_sided, delta, xi.step());
  KineticFunction out(chi.grid(), xi);
  const auto nb = static_cast<std::size_t>(xi.bins());
  for (std::size_t node = 0; node < chi.grid().size(); ++node) {
    convolve_clamped(k, chi.values().data() + node * nb, out.values().data() + node * nb, xi.bins(), 1);
  }
  return out;
}

std::vector<KineticFunction> mollify_txxi(const std::vector<KineticFunction>& series, double dt, double eps,
                                          double delta) {
  if (series.empty()) return {};
  const ChartGrid& grid = series.front().grid();
  const XiGrid& xi = series.front().xi();
  const int nb = xi.bins();
  const int count = static_cast<int>(series.size());

  std::vector<KineticFunction> out;
  out.reserve(series.size());
  for (const auto& chi : series) out.push_back(mollify_xi(chi, delta));

  const Kernel1D kt = make_kernel(KernelShape::one_sided, eps, dt);
  std::vector<double> line(static_cast<std::size_t>(count)), res(static_cast<std::size_t>(count));
  for (std::size_t node = 0; node < grid.size(); ++node) {
    for (int b = 0; b < nb; ++b) {
      for (int i = 0; i < count; ++i) line[static_cast<std::size_t>(i)] = out[static_cast<std::size_t>(i)](node, b);
      convolve_clamped(kt, line.data(), res.data(), count, 1);
      for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)](node, b) = res[static_cast<std::size_t>(i)];
    }
  }

  ScalarField plane(grid);
  for (auto& chi : out) {
    for (int b = 0; b < nb; ++b) {
      for (std::size_t node = 0; node < grid.size(); ++node) plane(node) = chi(node, b);
      const ScalarField m = mollify_x(plane, eps);
      for (std::size_t node = 0; node < grid.size(); ++node) chi(node, b) = m(node);
    }
  }
  return out;
}

double dchi_identity_check(const ScalarField& u, const ScalarField& phi, const XiGrid& xi, double eps, double delta) {
  const ChartGrid& grid = u.grid();
  const double dxi = xi.step();
  const Kernel1D k = make_kernel(KernelShape::one_sided, delta, dxi);
  const int pad = static_cast<int>(k.weights.size()) - k.first + 2;
  const int lo = -pad;                 // first extended index
  const int count = xi.bins() + 2 * pad;  // extended points / edges
  const std::size_t stride = static_cast<std::size_t>(count);

  // Point values at centres p_j = (j + 1/2) dxi and edge masses at e_i = i dxi,
  // both indexed by j - lo (resp. i - lo).
  std::vector<double> pts(grid.size() * stride, 0.0);
  std::vector<double> dirac0(grid.size() * stride, 0.0);
  std::vector<double> diracu(grid.size() * stride, 0.0);
  for (std::size_t node = 0; node < grid.size(); ++node) {
    const double v = u(node);
    if (v < 0.0) throw ConfigError("kinetic function needs u >= 0");
    for (int j = 0; j < xi.bins() && xi.center(j) <= v; ++j) pts[node * stride + static_cast<std::size_t>(j - lo)] = phi(node);
    dirac0[node * stride + static_cast<std::size_t>(-lo)] = 1.0 / dxi;
    const double p = v / dxi;
    const int i0 = static_cast<int>(std::floor(p));
    const double f = p - i0;
    diracu[node * stride + static_cast<std::size_t>(i0 - lo)] += phi(node) * (1.0 - f) / dxi;
    diracu[node * stride + static_cast<std::size_t>(i0 + 1 - lo)] += phi(node) * f / dxi;
  }

  auto mollify_all = [&](std::vector<double>& data) {
    std::vector<double> tmp(stride);
    for (std::size_t node = 0; node < grid.size(); ++node) {
      convolve_clamped(k, data.data() + node * stride, tmp.data(), count, 1);
      std::copy(tmp.begin(), tmp.end(), data.begin() + static_cast<std::ptrdiff_t>(node * stride));
    }
    ScalarField plane(grid);
    for (int j = 0; j < count; ++j) {
      for (std::size_t node = 0; node < grid.size(); ++node) plane(node) = data[node * stride + static_cast<std::size_t>(j)];
      const ScalarField m = mollify_x(plane, eps);
      for (std::size_t node = 0; node < grid.size(); ++node) data[node * stride + static_cast<std::size_t>(j)] = m(node);
    }
  };
  mollify_all(pts);
  mollify_all(diracu);
  // phi^eps rho_delta(xi): the x-mollified phi times the xi-smoothed unit mass at 0.
  std::vector<double> rho(stride, 0.0);
  convolve_clamped(k, dirac0.data(), rho.data(), count, 1);
  const ScalarField phi_eps = mollify_x(phi, eps);

  double worst = 0.0;
  for (std::size_t node = 0; node < grid.size(); ++node) {
    // Edge i sits between points i-1 and i.
    for (int i = lo + 1; i < lo + count; ++i) {
      const std::size_t ii = static_cast<std::size_t>(i - lo);
      const double lhs = (pts[node * stride + ii] - pts[node * stride + ii - 1]) / dxi;
      const double rhs = phi_eps(node) * rho[ii] - diracu[node * stride + ii];
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

KineticResidual kinetic_residual(const Trajectory& tr, const Problem& p, const std::vector<KineticTest>& battery) {
  const ChartGrid& grid = p.metric.grid();
  const XiGrid& xi = p.diffusion.xi();
  const int d = grid.dim();
  const int nb = xi.bins();
  const double dxi = xi.step();
  const double eta = tr.config.eta;
  const double cell = grid.cell_volume();
  const std::size_t nt = battery.size();

  // theta at bin centres for each test
  std::vector<std::vector<double>> theta(nt);
  for (std::size_t q = 0; q < nt; ++q) {
    for (int b = 0; b < nb; ++b) {
      theta[q].push_back(battery[q].theta(xi.center(b)));
    }
  }

  // f', A' at bin centres
  const XiTable& fp = p.flux.f_prime();
  const XiTable& ap = p.diffusion.a_prime();

  struct Terms {
    ScalarField state;
    ScalarField spatial;
    ScalarField dissipation;
  };
  auto evaluate = [&](const ScalarField& u, std::size_t q) {
    const KineticFunction chi = chi_from_u(u, xi, 1e-6);
    ScalarField x(grid);
    VectorField f(grid);
    Tensor11Field a(grid);
    for (std::size_t node = 0; node < grid.size(); ++node) {
      double xs = 0.0;
      for (int b = 0; b < nb; ++b) {
        const double w = dxi * theta[q][static_cast<std::size_t>(b)] * chi(node, b);
        if (w == 0.0) continue;
        xs += w;
        for (int k = 0; k < d; ++k) f(node, k) += w * 0.5 * (fp(node, b, k) + fp(node, b + 1, k));
        for (int c = 0; c < d * d; ++c) a(node, c) += w * 0.5 * (ap(node, b, c) + ap(node, b + 1, c));
      }
      x(node) = xs;
    }
    Terms t{x, div_vector(f, p.metric), ScalarField(grid)};
    if (!p.diffusion.is_zero()) t.spatial -= divdiv_tensor11(a, p.metric);
    t.spatial.axpy(-eta, laplace_beltrami(x, p.metric));
    const DissipationDensities dens = dissipation_densities(u, p.diffusion, p.metric, eta);
    const XiBump& th = battery[q].theta;
    for (std::size_t node = 0; node < grid.size(); ++node) {
      const double w = hat_average(xi, [&th](double s) { return th.derivative(s); }, u(node));
      t.dissipation(node) = w * (dens.m(node) + dens.n(node));
    }
    return t;
  };

  KineticResidual out;
  out.values.assign(nt, 0.0);
  out.ablated.assign(nt, 0.0);
  for (std::size_t q = 0; q < nt; ++q) {
    const SpaceTimeTest& phi = battery[q].phi;
    Terms prev = evaluate(tr.snapshots.front().u, q);
    for (std::size_t k = 0; k + 1 < tr.snapshots.size(); ++k) {
      const Snapshot& sa = tr.snapshots[k];
      const Snapshot& sb = tr.snapshots[k + 1];
      Terms next = evaluate(sb.u, q);
      const double dt = sb.t - sa.t;
      const double tm = 0.5 * (sa.t + sb.t);
      double full = 0.0;
      double ablated = 0.0;
      for (std::size_t node = 0; node < grid.size(); ++node) {
        const double x1 = grid.x(node, 0);
        const double x2 = d == 2 ? grid.x(node, 1) : 0.0;
        const double pa = phi(sa.t, x1, x2);
        const double pb = phi(sb.t, x1, x2);
        const double base = (next.state(node) - prev.state(node)) * phi(tm, x1, x2) +
                            0.5 * dt * (prev.spatial(node) * pa + next.spatial(node) * pb);
        const double diss = 0.5 * dt * (prev.dissipation(node) * pa + next.dissipation(node) * pb);
        full += (base + diss) * p.metric.sqrt_det(node);
        ablated += base * p.metric.sqrt_det(node);
      }
      out.values[q] += full * cell;
      out.ablated[q] += ablated * cell;
      prev = std::move(next);
    }
  }
  for (double v : out.values) out.max_abs = std::max(out.max_abs, std::abs(v));
  for (double v : out.ablated) out.ablated_max_abs = std::max(out.ablated_max_abs, std::abs(v));
  return out;
}

std::vector<ContractionPoint> contraction_series(const Trajectory& a, const Trajectory& b, const MetricField& metric,
                                                 const XiGrid& xi) {
  std::vector<ContractionPoint> out;
  const double tol = 1e-9 * std::max(a.config.t_end, b.config.t_end);
  std::size_t j = 0;
  for (const Snapshot& sa : a.snapshots) {
    while (j < b.snapshots.size() && b.snapshots[j].t < sa.t - tol) ++j;
    if (j == b.snapshots.size()) break;
    if (std::abs(b.snapshots[j].t - sa.t) > tol) continue;
    const KineticFunction ca = chi_from_u(sa.u, xi, 1e-6);
    const KineticFunction cb = chi_from_u(b.snapshots[j].u, xi, 1e-6);
    out.push_back({sa.t, contraction(ca, cb, metric), contraction(cb, ca, metric)});
  }
  return out;
}

std::vector<FriedrichsRow> friedrichs_commutator(const Expr& a, const ScalarField& v, const std::vector<double>& eps,
                                                 FriedrichsPart part, KernelShape shape) {
  const ChartGrid& grid = v.grid();
  const ScalarField coef = sample_expression(a, grid);
  auto d0 = [&](const ScalarField& f) {
    const OneFormField df = differential(f);
    ScalarField out(grid);
    for (std::size_t node = 0; node < grid.size(); ++node) out(node) = df(node, 0);
    return out;
  };
  auto times = [&](const ScalarField& f) {
    ScalarField out = f;
    for (std::size_t node = 0; node < grid.size(); ++node) out(node) *= coef(node);
    return out;
  };

  std::vector<FriedrichsRow> rows;
  for (double e : eps) {
    ScalarField c(grid);
    if (part == FriedrichsPart::ii) {
      const ScalarField dv = d0(v);
      c = mollify_x(times(dv), e, shape);
      c -= times(mollify_x(dv, e, shape));
    } else {
      c = mollify_x(d0(times(v)), e, shape);
      c -= d0(times(mollify_x(v, e, shape)));
    }
    double l1 = 0.0;
    for (double x : c.values()) l1 += std::abs(x);
    rows.push_back({e, l1 * grid.cell_volume()});
  }
  return rows;
}

}  // namespace riemdiff
