#pragma once

// Scenario fixtures shared by the unit and acceptance tests. Coefficients are
// given as expression text so the same definitions drive the CLI fixtures.

#include <memory>
#include <optional>
#include <string>

#include "riemdiff/expr.hpp"
#include "riemdiff/metric.hpp"
#include "riemdiff/model.hpp"
#include "riemdiff/solver.hpp"

namespace fixtures {

struct Scenario {
  riemdiff::ChartGrid grid;
  riemdiff::XiGrid xi;
  riemdiff::MetricField metric;
  riemdiff::DiffusionModel dm;
  riemdiff::FluxModel fm;
  riemdiff::ScalarField u0;
  riemdiff::SolverConfig cfg;

  riemdiff::Problem problem() const { return {metric, fm, dm}; }
  riemdiff::Trajectory run() const { return riemdiff::run(cfg, problem(), u0); }
  riemdiff::Trajectory run(const riemdiff::SolverConfig& c) const { return riemdiff::run(c, problem(), u0); }
};

inline riemdiff::TensorExprs sigma_exprs(const std::string& s11, const std::string& s12 = "0",
                                         const std::string& s21 = "0", const std::string& s22 = "0") {
  riemdiff::TensorExprs s;
  s[0][0] = riemdiff::Expr::parse(s11);
  s[0][1] = riemdiff::Expr::parse(s12);
  s[1][0] = riemdiff::Expr::parse(s21);
  s[1][1] = riemdiff::Expr::parse(s22);
  return s;
}

struct Spec {
  int d = 1;
  int n = 128;
  int bins = 64;
  std::string metric = "euclidean";
  riemdiff::TensorExprs sigma = sigma_exprs("0");
  // Explicit flux f1[, f2]; ignored when `compatible`.
  std::string f1 = "0";
  std::string f2 = "0";
  bool compatible = false;
  std::string stream;
  std::string u0 = "0.5 + 0.4*sin(2*pi*x1)";
  double eta = 1e-2;
  double t_end = 0.05;
};

inline std::unique_ptr<Scenario> build(const Spec& s) {
  using namespace riemdiff;
  ChartGrid grid(s.d, s.n);
  XiGrid xi(s.bins);
  MetricField metric = build_metric(metric_catalog(s.metric, s.d), grid);
  DiffusionModel dm = DiffusionModel::from_expressions(s.sigma, metric, xi);
  std::optional<FluxModel> fm;
  if (s.compatible) {
    if (s.stream.empty()) {
      fm = make_compatible_flux(dm, metric, nullptr);
    } else {
      const Expr stream = Expr::parse(s.stream);
      fm = make_compatible_flux(dm, metric, &stream);
    }
  } else {
    fm = FluxModel::from_expressions({Expr::parse(s.f1), Expr::parse(s.f2)}, std::nullopt, grid, xi);
  }
  ScalarField u0 = sample_expression(Expr::parse(s.u0), grid);
  SolverConfig cfg;
  cfg.eta = s.eta;
  cfg.t_end = s.t_end;
  cfg.snapshot_every = 1;
  return std::make_unique<Scenario>(
      Scenario{grid, xi, std::move(metric), std::move(dm), std::move(*fm), std::move(u0), cfg});
}

// Flat 1D heat flow: f = 0, sigma = 0.
inline Spec heat(int n = 128, int bins = 64) {
  Spec s;
  s.n = n;
  s.bins = bins;
  s.eta = 1e-2;
  s.t_end = 0.05;
  return s;
}

// Flat 1D porous-medium type: sigma = sqrt(2 xi), so A = xi^2.
inline Spec porous(int n = 128, int bins = 64) {
  Spec s;
  s.n = n;
  s.bins = bins;
  s.sigma = sigma_exprs("sqrt(2*xi)");
  s.eta = 1e-3;
  s.t_end = 0.05;
  return s;
}

// Flat 1D Burgers-type transport, sigma = 0.
inline Spec shock(int n = 128, int bins = 64) {
  Spec s;
  s.n = n;
  s.bins = bins;
  s.f1 = "xi^2/2";
  s.u0 = "0.5 + 0.5*sin(2*pi*x1)";
  s.eta = 5e-3;
  s.t_end = 0.5;
  return s;
}

// Curved 1D metric with a state-dependent degenerate diffusion and the
// matching compatible flux.
inline Spec curved1d(int n = 128, int bins = 64) {
  Spec s;
  s.n = n;
  s.bins = bins;
  s.metric = "curved1d";
  s.sigma = sigma_exprs("0.5*xi*(1 + 0.3*cos(2*pi*x1))");
  s.compatible = true;
  s.eta = 5e-3;
  s.t_end = 0.05;
  return s;
}

// 2D compatible pair on a catalog metric with a stream-function flux.
inline Spec curved2d(const std::string& metric = "warped2d", int n = 32, int bins = 32) {
  Spec s;
  s.d = 2;
  s.n = n;
  s.bins = bins;
  s.metric = metric;
  s.sigma = sigma_exprs("0.25*(1 + xi) + 0.02*sin(2*pi*x1)", "0.02*xi*cos(2*pi*x2)", "0",
                        "0.25*(1 + xi*xi)");
  s.compatible = true;
  s.stream = "0.1*sin(2*pi*x1)*sin(2*pi*x2)*(1 + xi)";
  s.u0 = "0.5 + 0.3*sin(2*pi*x1)*cos(2*pi*x2)";
  s.eta = 5e-3;
  s.t_end = 0.05;
  return s;
}

}  // namespace fixtures
