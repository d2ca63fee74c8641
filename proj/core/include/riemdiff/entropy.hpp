#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "riemdiff/grid.hpp"
#include "riemdiff/ledger.hpp"
#include "riemdiff/metric.hpp"
#include "riemdiff/model.hpp"
#include "riemdiff/solver.hpp"
#include "riemdiff/test_functions.hpp"

namespace riemdiff {

// Entropy S with S(0) = 0 and its first two derivatives.
struct EntropyFn {
  std::string name;
  std::function<double(double)> s;
  std::function<double(double)> ds;
  std::function<double(double)> d2s;
  bool convex = true;
};

// "linear" (xi), "quadratic" (xi^2/2), "cubic" (xi^3/3), "exponential" (e^xi - 1).
EntropyFn entropy_catalog(std::string_view name);
std::vector<std::string> entropy_catalog_names();
EntropyFn operator+(const EntropyFn& a, const EntropyFn& b);

// int_0^xi f' S' and int_0^xi A' S' tabulated on the shared xi quadrature path.
struct EntropyPrimitives {
  XiPrimitive flux;
  XiPrimitive diffusion;
};
EntropyPrimitives entropy_primitives(const EntropyFn& s, const FluxModel& fm, const DiffusionModel& dm);

struct EntropyFluxFields {
  VectorField flux;
  Tensor11Field diffusion;
};
EntropyFluxFields entropy_flux_fields(const ScalarField& u, const EntropyFn& s, const FluxModel& fm,
                                      const DiffusionModel& dm);

// Linear interpolation of S'' between bin centres at u(x), the discrete
// counterpart of int S''(xi) delta(xi - u) dxi under hat deposition.
double hat_average(const XiGrid& xi, const std::function<double(double)>& f, double value);

struct WeakResidual {
  std::vector<double> values;  // one per test function
  double max_abs = 0.0;
};

// Weak residual of the viscous entropy balance
//   d_t S(u) + Div q_f(u) - Div Div q_A(u) - eta Lap S(u) + int S'' (n + m) dxi = 0
// against each weight of the battery, accumulated over consecutive snapshot
// pairs: the time derivative is paired with phi at the midpoint and the
// spatial terms use the trapezoid rule in time.
WeakResidual entropy_residual(const Trajectory& tr, const EntropyFn& s, const Problem& p,
                              const std::vector<SpaceTimeTest>& battery);

// Same weak form for the plain equation d_t u + div f(u) - Div Div A(u) - eta Lap u = 0.
WeakResidual scheme_residual(const Trajectory& tr, const Problem& p, const std::vector<SpaceTimeTest>& battery);

struct EnergyBalance {
  double total_m = 0.0;
  double total_n = 0.0;
  double initial_energy = 0.0;
  double final_energy = 0.0;
  double residual = 0.0;  // total_m + total_n + final - initial
  double relative = 0.0;  // residual / initial
};
EnergyBalance energy_balance(const Trajectory& tr, const MetricField& metric);

// L^2(dmu) norm of the one-form difference
//   [Div beta^psi(x, u) - Div beta^psi(., xi)|_{xi=u}] - sqrt(psi(u)) [same with beta].
double chain_rule_residual(const ScalarField& u, const XiFunction& psi, const DiffusionModel& dm,
                           const MetricField& metric);

// The bound is checked against nu_bin, nu averaged with the same hat weights
// the ledger uses for deposits (divided by dxi). Since nu is convex and
// decreasing, nu_bin >= nu at the centre; the centre values are reported too.
struct NuBound {
  std::vector<double> centers;
  std::vector<double> density;  // (M_b + N_b) / dxi
  std::vector<double> nu;       // int (u0 - xi_b)_+ dmu
  std::vector<double> nu_bin;   // hat-weighted bin average of nu
  double factor = 1.1;
  double absolute = 0.0;
  double worst_excess = 0.0;  // max of density - factor * nu_bin - absolute
  int worst_bin = -1;
  bool ok = true;
  bool ok_at_centers = true;  // same test against nu at the centre
};
NuBound nu_bound_check(const DissipationLedger& ledger, const ScalarField& u0, const MetricField& metric,
                       double factor = 1.1, double absolute = 0.0);

}  // namespace riemdiff
