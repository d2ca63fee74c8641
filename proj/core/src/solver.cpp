#include "riemdiff/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "riemdiff/error.hpp"
#include "riemdiff/operators.hpp"

namespace riemdiff {

namespace {

void check_state(const ScalarField& u, const SolverConfig& cfg, std::size_t step) {
  for (std::size_t node = 0; node < u.size(); ++node) {
    const double v = u(node);
    if (!std::isfinite(v)) {
      throw NumericalError("non-finite state at step " + std::to_string(step) + ", node " + std::to_string(node));
    }
    if (v < cfg.range_lo || v > cfg.range_hi) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "state " << v << " at node " << node << " left [" << cfg.range_lo << ", " << cfg.range_hi
          << "] at step " << step;
      throw NumericalError(msg.str());
    }
  }
}

}  // namespace

void SolverConfig::validate() const {
  if (!(eta > 0.0)) throw ConfigError("eta must be > 0");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("cfl must lie in (0, 1]");
  if (!(t_end > 0.0)) throw ConfigError("t_end must be > 0");
  if (snapshot_every < 1) throw ConfigError("snapshot_every must be >= 1");
  if (step_multiplier < 1) throw ConfigError("step_multiplier must be >= 1");
  if (!(range_lo < 0.0 && range_hi > 1.0)) throw ConfigError("state range must contain [0,1]");
}

double stable_dt(const SolverConfig& cfg, const Problem& p) {
  const ChartGrid& grid = p.metric.grid();
  const double h = grid.h();
  const double d = grid.dim();
  const double kappa = std::max(1.0, p.metric.max_inverse_eigenvalue());
  const double convective = h / (d * p.flux.max_f_prime_norm(p.metric) * std::sqrt(kappa) + 1e-30);
  const double diffusive = h * h / (2.0 * d * (cfg.eta + p.diffusion.max_a_prime_norm()) * kappa);
  return cfg.cfl * std::min(convective, diffusive);
}

ScalarField rhs(const ScalarField& u, const Problem& p, double eta) {
  ScalarField out = laplace_beltrami(u, p.metric);
  out *= eta;
  out -= div_vector(p.flux.compose(u), p.metric);
  if (!p.diffusion.is_zero()) out += divdiv_tensor11(p.diffusion.a().compose<FieldKind::tensor11>(u), p.metric);
  return out;
}

Monitor measure(const ScalarField& u, double t, const MetricField& metric) {
  Monitor m;
  m.t = t;
  m.mass = integrate(u, metric);
  const auto [lo, hi] = std::minmax_element(u.values().begin(), u.values().end());
  m.min = *lo;
  m.max = *hi;
  ScalarField e = u;
  for (double& v : e.values()) v = 0.5 * v * v;
  m.energy = integrate(e, metric);
  return m;
}

Trajectory run(const SolverConfig& cfg, const Problem& p, const ScalarField& u0) {
  cfg.validate();
  if (!(u0.grid() == p.metric.grid())) throw ConfigError("initial data and metric use different grids");
  for (double v : u0.values()) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("initial data must lie in [0,1]");
  }

  const double dt0 = stable_dt(cfg, p);
  const auto base = static_cast<std::size_t>(std::ceil(cfg.t_end / dt0 - 1e-9));
  const std::size_t steps = std::max<std::size_t>(1, base) * static_cast<std::size_t>(cfg.step_multiplier);
  const double dt = cfg.t_end / static_cast<double>(steps);

  Trajectory tr{cfg, dt, steps, {}, {}, DissipationLedger(p.diffusion.xi())};
  tr.snapshots.push_back({0, 0.0, u0});
  tr.monitors.push_back(measure(u0, 0.0, p.metric));

  ScalarField u = u0;
  DissipationDensities dens = dissipation_densities(u, p.diffusion, p.metric, cfg.eta);
  for (std::size_t k = 0; k < steps; ++k) {
    ScalarField next = u;
    const ScalarField k1 = rhs(u, p, cfg.eta);
    if (cfg.scheme == TimeScheme::euler) {
      next.axpy(dt, k1);
    } else {
      ScalarField stage = u;
      stage.axpy(dt, k1);
      check_state(stage, cfg, k + 1);
      const ScalarField k2 = rhs(stage, p, cfg.eta);
      next.axpy(0.5 * dt, k1);
      next.axpy(0.5 * dt, k2);
    }
    check_state(next, cfg, k + 1);

    DissipationDensities next_dens = dissipation_densities(next, p.diffusion, p.metric, cfg.eta);
    tr.ledger.deposit(u, dens, p.metric, 0.5 * dt);
    tr.ledger.deposit(next, next_dens, p.metric, 0.5 * dt);

    u = std::move(next);
    dens = std::move(next_dens);
    const double t = (k + 1 == steps) ? cfg.t_end : dt * static_cast<double>(k + 1);
    tr.monitors.push_back(measure(u, t, p.metric));
    if ((k + 1) % static_cast<std::size_t>(cfg.snapshot_every) == 0 || k + 1 == steps) {
      tr.snapshots.push_back({k + 1, t, u});
    }
  }
  return tr;
}

double total_variation(const ScalarField& u) {
  const ChartGrid& grid = u.grid();
  const double face = grid.dim() == 2 ? grid.h() : 1.0;
  double tv = 0.0;
  for (std::size_t node = 0; node < grid.size(); ++node) {
    for (int k = 0; k < grid.dim(); ++k) tv += std::abs(u(grid.shift(node, k, 1)) - u(node));
  }
  return tv * face;
}

}  // namespace riemdiff
