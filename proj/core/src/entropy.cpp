#include "riemdiff/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "riemdiff/error.hpp"
#include "riemdiff/operators.hpp"

namespace riemdiff {

namespace {

XiPrimitive weighted_primitive(const XiTable& integrand, const std::function<double(double)>& w) {
  XiTable q = integrand;
  const XiGrid& xi = q.xi();
  for (int e = 0; e < xi.edges(); ++e) {
    const double s = w(xi.edge(e));
    for (std::size_t node = 0; node < q.grid().size(); ++node) {
      for (double& v : q.at(node, e)) v *= s;
    }
  }
  return XiPrimitive(std::move(q));
}

// Integrand of the weak form at one snapshot.
using SnapshotTerm = std::function<ScalarField(const ScalarField&)>;
using StateTerm = std::function<ScalarField(const ScalarField&)>;

WeakResidual weak_residual(const Trajectory& tr, const MetricField& metric, const StateTerm& state,
                           const SnapshotTerm& spatial, const std::vector<SpaceTimeTest>& battery) {
  const ChartGrid& grid = metric.grid();
  const double cell = grid.cell_volume();
  WeakResidual out;
  out.values.assign(battery.size(), 0.0);

  ScalarField s_prev = state(tr.snapshots.front().u);
  ScalarField g_prev = spatial(tr.snapshots.front().u);
  for (std::size_t k = 0; k + 1 < tr.snapshots.size(); ++k) {
    const Snapshot& a = tr.snapshots[k];
    const Snapshot& b = tr.snapshots[k + 1];
    ScalarField s_next = state(b.u);
    ScalarField g_next = spatial(b.u);
    const double dt = b.t - a.t;
    const double tm = 0.5 * (a.t + b.t);
    for (std::size_t q = 0; q < battery.size(); ++q) {
      const SpaceTimeTest& phi = battery[q];
      double acc = 0.0;
      for (std::size_t node = 0; node < grid.size(); ++node) {
        const double x1 = grid.x(node, 0);
        const double x2 = grid.dim() == 2 ? grid.x(node, 1) : 0.0;
        const double term = (s_next(node) - s_prev(node)) * phi(tm, x1, x2) +
                            0.5 * dt * (g_prev(node) * phi(a.t, x1, x2) + g_next(node) * phi(b.t, x1, x2));
        acc += term * metric.sqrt_det(node);
      }
      out.values[q] += acc * cell;
    }
    s_prev = std::move(s_next);
    g_prev = std::move(g_next);
  }
  for (double v : out.values) out.max_abs = std::max(out.max_abs, std::abs(v));
  return out;
}

}  // namespace

EntropyFn entropy_catalog(std::string_view name) {
  if (name == "linear") {
    return {"linear", [](double x) { return x; }, [](double) { return 1.0; }, [](double) { return 0.0; }, true};
  }
  if (name == "quadratic") {
    return {"quadratic", [](double x) { return 0.5 * x * x; }, [](double x) { return x; }, [](double) { return 1.0; },
            true};
  }
  if (name == "cubic") {
    return {"cubic", [](double x) { return x * x * x / 3.0; }, [](double x) { return x * x; },
            [](double x) { return 2.0 * x; }, true};
  }
  if (name == "exponential") {
    return {"exponential", [](double x) { return std::expm1(x); }, [](double x) { return std::exp(x); },
            [](double x) { return std::exp(x); }, true};
  }
  throw ConfigError("unknown entropy '" + std::string(name) + "'");
}

std::vector<std::string> entropy_catalog_names() { return {"linear", "quadratic", "cubic", "exponential"}; }

EntropyFn operator+(const EntropyFn& a, const EntropyFn& b) {
  return {a.name + "+" + b.name, [a, b](double x) { return a.s(x) + b.s(x); },
          [a, b](double x) { return a.ds(x) + b.ds(x); }, [a, b](double x) { return a.d2s(x) + b.d2s(x); },
          a.convex && b.convex};
}

EntropyPrimitives entropy_primitives(const EntropyFn& s, const FluxModel& fm, const DiffusionModel& dm) {
  return {weighted_primitive(fm.f_prime(), s.ds), weighted_primitive(dm.a_prime(), s.ds)};
}

EntropyFluxFields entropy_flux_fields(const ScalarField& u, const EntropyFn& s, const FluxModel& fm,
                                      const DiffusionModel& dm) {
  const EntropyPrimitives ep = entropy_primitives(s, fm, dm);
  return {ep.flux.compose<FieldKind::vector>(u), ep.diffusion.compose<FieldKind::tensor11>(u)};
}

double hat_average(const XiGrid& xi, const std::function<double(double)>& f, double value) {
  const HatWeights w = hat_weights(xi, value);
  return w.w_lo * f(xi.center(w.lo)) + w.w_hi * f(xi.center(w.hi));
}

WeakResidual entropy_residual(const Trajectory& tr, const EntropyFn& s, const Problem& p,
                              const std::vector<SpaceTimeTest>& battery) {
  const EntropyPrimitives ep = entropy_primitives(s, p.flux, p.diffusion);
  const double eta = tr.config.eta;
  const XiGrid& xi = p.diffusion.xi();
  auto state = [&](const ScalarField& u) {
    ScalarField out = u;
    for (double& v : out.values()) v = s.s(v);
    return out;
  };
  auto spatial = [&](const ScalarField& u) {
    ScalarField out = div_vector(ep.flux.compose<FieldKind::vector>(u), p.metric);
    if (!p.diffusion.is_zero()) out -= divdiv_tensor11(ep.diffusion.compose<FieldKind::tensor11>(u), p.metric);
    ScalarField lap = laplace_beltrami(state(u), p.metric);
    out.axpy(-eta, lap);
    const DissipationDensities dens = dissipation_densities(u, p.diffusion, p.metric, eta);
    for (std::size_t node = 0; node < u.size(); ++node) {
      out(node) += hat_average(xi, s.d2s, u(node)) * (dens.m(node) + dens.n(node));
    }
    return out;
  };
  return weak_residual(tr, p.metric, state, spatial, battery);
}

WeakResidual scheme_residual(const Trajectory& tr, const Problem& p, const std::vector<SpaceTimeTest>& battery) {
  const double eta = tr.config.eta;
  auto state = [](const ScalarField& u) { return u; };
  auto spatial = [&](const ScalarField& u) {
    ScalarField out = rhs(u, p, eta);
    out *= -1.0;
    return out;
  };
  return weak_residual(tr, p.metric, state, spatial, battery);
}

EnergyBalance energy_balance(const Trajectory& tr, const MetricField& /*metric*/) {
  EnergyBalance e;
  e.total_m = tr.ledger.total_m();
  e.total_n = tr.ledger.total_n();
  e.initial_energy = tr.monitors.front().energy;
  e.final_energy = tr.monitors.back().energy;
  e.residual = e.total_m + e.total_n + e.final_energy - e.initial_energy;
  e.relative = e.initial_energy > 0.0 ? e.residual / e.initial_energy : e.residual;
  return e;
}

double chain_rule_residual(const ScalarField& u, const XiFunction& psi, const DiffusionModel& dm,
                           const MetricField& metric) {
  const ChartGrid& grid = metric.grid();
  const XiGrid& xi = dm.xi();

  // Div x -> P(x, xi) frozen in xi, evaluated at xi = u(x).
  auto frozen_div = [&](const XiPrimitive& prim) {
    XiTable div_q(grid, xi, grid.dim());
    for (int e = 0; e < xi.edges(); ++e) {
      div_q.set_slice(e, div_tensor11(prim.integrand().slice<FieldKind::tensor11>(e), metric));
    }
    return XiPrimitive(std::move(div_q)).compose<FieldKind::oneform>(u);
  };
  auto defect = [&](const XiPrimitive& prim) {
    OneFormField w = div_tensor11(prim.compose<FieldKind::tensor11>(u), metric);
    w -= frozen_div(prim);
    return w;
  };

  OneFormField lhs = defect(dm.beta_psi(psi));
  OneFormField rhs = defect(dm.beta());
  for (std::size_t node = 0; node < grid.size(); ++node) {
    const double w = std::sqrt(psi(u(node)));
    for (double& v : rhs.at(node)) v *= w;
  }
  lhs -= rhs;
  return std::sqrt(integrate(oneform_norm_sq(lhs, metric), metric));
}

namespace {

// int_a^b w(s) (u - s)_+ ds for w linear from wa to wb.
double weighted_positive_part(double u, double a, double b, double wa, double wb) {
  const double top = std::min(b, u);
  if (!(top > a)) return 0.0;
  const double slope = (wb - wa) / (b - a);
  // w(s) (u - s) with s = a + r, r in [0, top - a]
  const double len = top - a;
  const double ua = u - a;
  return wa * (ua * len - 0.5 * len * len) + slope * (0.5 * ua * len * len - len * len * len / 3.0);
}

}  // namespace

NuBound nu_bound_check(const DissipationLedger& ledger, const ScalarField& u0, const MetricField& metric,
                       double factor, double absolute) {
  const XiGrid& xi = ledger.xi();
  const int last = xi.bins() - 1;
  const double dxi = xi.step();
  const auto [lo_it, hi_it] = std::minmax_element(u0.values().begin(), u0.values().end());
  const double lo = std::min(*lo_it, xi.center(0));
  const double hi = std::max(*hi_it, xi.center(last));
  NuBound out;
  out.factor = factor;
  out.absolute = absolute;
  out.worst_excess = -std::numeric_limits<double>::infinity();
  ScalarField pos(u0.grid());
  ScalarField avg(u0.grid());
  for (int b = 0; b < xi.bins(); ++b) {
    const double c = xi.center(b);
    for (std::size_t node = 0; node < u0.size(); ++node) {
      const double u = u0(node);
      pos(node) = std::max(0.0, u - c);
      double s = 0.0;
      if (b == 0) {
        s += weighted_positive_part(u, lo, c, 1.0, 1.0);
      } else {
        s += weighted_positive_part(u, xi.center(b - 1), c, 0.0, 1.0);
      }
      if (b == last) {
        s += weighted_positive_part(u, c, hi, 1.0, 1.0);
      } else {
        s += weighted_positive_part(u, c, xi.center(b + 1), 1.0, 0.0);
      }
      avg(node) = s / dxi;
    }
    const double nu = integrate(pos, metric);
    const double nu_bin = integrate(avg, metric);
    const double dens = (ledger.m()[static_cast<std::size_t>(b)] + ledger.n()[static_cast<std::size_t>(b)]) / dxi;
    out.centers.push_back(c);
    out.nu.push_back(nu);
    out.nu_bin.push_back(nu_bin);
    out.density.push_back(dens);
    if (dens > factor * nu + absolute) out.ok_at_centers = false;
    const double excess = dens - factor * nu_bin - absolute;
    if (excess > out.worst_excess) {
      out.worst_excess = excess;
      out.worst_bin = b;
    }
  }
  out.ok = out.worst_excess <= 0.0;
  return out;
}

}  // namespace riemdiff
