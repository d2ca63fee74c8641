#pragma once

#include <cstddef>
#include <vector>

#include "riemdiff/grid.hpp"
#include "riemdiff/ledger.hpp"
#include "riemdiff/metric.hpp"
#include "riemdiff/model.hpp"

namespace riemdiff {

enum class TimeScheme { euler, heun };

struct SolverConfig {
  double eta = 1e-2;
  double cfl = 0.4;
  double t_end = 0.1;
  // Keep every k-th step as a snapshot; the first and last states are always kept.
  int snapshot_every = 1;
  TimeScheme scheme = TimeScheme::heun;
  // Multiplies the step count derived from stable_dt (dt variants for run pairs).
  int step_multiplier = 1;
  // Admissible state range; coefficients are tabulated on [0,1] only.
  double range_lo = -0.1;
  double range_hi = 1.1;

  void validate() const;
};

// Everything that defines one viscous problem. Non-owning.
struct Problem {
  const MetricField& metric;
  const FluxModel& flux;
  const DiffusionModel& diffusion;
};

// c * min(h / (d |f'|_g sqrt(k) + 1e-30), h^2 / (2 d (eta + |A'|_op) k)) with
// k the largest eigenvalue of g^{-1} (k = 1 on flat metrics).
double stable_dt(const SolverConfig& cfg, const Problem& p);

// -div f(x, u) + Div Div A(x, u) + eta Lap u
ScalarField rhs(const ScalarField& u, const Problem& p, double eta);

struct Monitor {
  double t = 0.0;
  double mass = 0.0;
  double min = 0.0;
  double max = 0.0;
  double energy = 0.0;  // int u^2/2 dmu
};
Monitor measure(const ScalarField& u, double t, const MetricField& metric);

struct Snapshot {
  std::size_t step = 0;
  double t = 0.0;
  ScalarField u;
};

struct Trajectory {
  SolverConfig config;
  double dt = 0.0;
  std::size_t steps = 0;
  std::vector<Snapshot> snapshots;
  std::vector<Monitor> monitors;
  DissipationLedger ledger;

  const ScalarField& initial() const { return snapshots.front().u; }
  const ScalarField& final() const { return snapshots.back().u; }
};

// Fixed-step integration to t_end. Throws NumericalError when the state leaves
// [range_lo, range_hi] or stops being finite.
Trajectory run(const SolverConfig& cfg, const Problem& p, const ScalarField& u0);

// Total variation sum over grid edges of |u(x+h e_k) - u(x)| h^{d-1}.
double total_variation(const ScalarField& u);

}  // namespace riemdiff
