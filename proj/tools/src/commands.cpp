#include "riemdiff_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "riemdiff/entropy.hpp"
#include "riemdiff/error.hpp"
#include "riemdiff/field_io.hpp"
#include "riemdiff/kinetic.hpp"
#include "riemdiff/operators.hpp"
#include "riemdiff/test_functions.hpp"

#ifndef RIEMDIFF_VERSION
#define RIEMDIFF_VERSION "unknown"
#endif

namespace riemdiff::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string version_string() { return std::string("riemdiff ") + RIEMDIFF_VERSION; }

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// Collects named pass/fail verdicts for the report and the exit code.
class Checks {
 public:
  void add(const std::string& name, double value, double limit, bool ok, const std::string& relation) {
    items_.push_back({{"name", name}, {"value", value}, {"limit", limit}, {"relation", relation}, {"ok", ok}});
    ok_ = ok_ && ok;
  }
  void at_most(const std::string& name, double value, double limit) {
    add(name, value, limit, value <= limit, "<=");
  }
  void at_least(const std::string& name, double value, double limit) {
    add(name, value, limit, value >= limit, ">=");
  }
  bool ok() const noexcept { return ok_; }
  const json& items() const noexcept { return items_; }

  void print(std::ostream& log) const {
    for (const auto& c : items_) {
      log << (c["ok"].get<bool>() ? "  ok    " : "  FAIL  ") << std::left << std::setw(34)
          << c["name"].get<std::string>() << short_fmt(c["value"].get<double>()) << ' '
          << c["relation"].get<std::string>() << ' ' << short_fmt(c["limit"].get<double>()) << '\n';
    }
  }

 private:
  json items_ = json::array();
  bool ok_ = true;
};

json header(const RunConfig& cfg, const std::string& command) {
  json echo = json::object();
  for (const auto& [k, v] : cfg.echo) echo[k] = v;
  return {{"version", version_string()}, {"command", command}, {"config", echo}};
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void write_monitors(const fs::path& path, const std::vector<Monitor>& monitors) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "t,mass,min,max,energy\n";
  for (const Monitor& m : monitors) {
    out << fmt(m.t) << ',' << fmt(m.mass) << ',' << fmt(m.min) << ',' << fmt(m.max) << ',' << fmt(m.energy) << '\n';
  }
}

void write_ledger(const fs::path& path, const DissipationLedger& ledger, const NuBound& nu) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "xi,M,N,nu,nu_bin\n";
  for (int b = 0; b < ledger.xi().bins(); ++b) {
    const auto k = static_cast<std::size_t>(b);
    out << fmt(ledger.xi().center(b)) << ',' << fmt(ledger.m()[k]) << ',' << fmt(ledger.n()[k]) << ','
        << fmt(nu.nu[k]) << ',' << fmt(nu.nu_bin[k]) << '\n';
  }
}

void dump_field(const RunConfig& cfg, const fs::path& dir, const std::string& stem, const ScalarField& u) {
  if (cfg.output.format == "none") return;
  fs::create_directories(dir);
  if (cfg.output.format == "csv") write_field_csv(dir / (stem + ".csv"), u);
  else write_field_raw(dir / (stem + ".bin"), u);
}

void dump_snapshots(const RunConfig& cfg, const fs::path& out, const Trajectory& tr) {
  const fs::path dir = out / "fields";
  dump_field(cfg, dir, "u_initial", tr.initial());
  dump_field(cfg, dir, "u_final", tr.final());
  if (cfg.output.dump_every > 0) {
    for (std::size_t k = 0; k < tr.snapshots.size(); k += static_cast<std::size_t>(cfg.output.dump_every)) {
      char stem[32];
      std::snprintf(stem, sizeof stem, "u_%08zu", tr.snapshots[k].step);
      dump_field(cfg, dir, stem, tr.snapshots[k].u);
    }
  }
}

json monitor_json(const Monitor& m) {
  return {{"t", m.t}, {"mass", m.mass}, {"min", m.min}, {"max", m.max}, {"energy", m.energy}};
}

std::pair<double, double> range_of(const std::vector<Monitor>& monitors) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const Monitor& m : monitors) {
    lo = std::min(lo, m.min);
    hi = std::max(hi, m.max);
  }
  return {lo, hi};
}

json residual_json(const WeakResidual& r) { return {{"values", r.values}, {"max_abs", r.max_abs}}; }

XiFunction xi_function(const std::string& text) {
  const Expr e = Expr::parse(text);
  return [e](double xi) {
    EvalContext ctx{{"xi", xi}};
    return e.eval(ctx);
  };
}

TensorExprs sigma_exprs(const ScenarioBlock& sc) {
  TensorExprs s;
  s[0][0] = Expr::parse(sc.sigma[0]);
  s[0][1] = Expr::parse(sc.sigma[1]);
  s[1][0] = Expr::parse(sc.sigma[2]);
  s[1][1] = Expr::parse(sc.sigma[3]);
  return s;
}

SolverConfig solver_config(const RunConfig& cfg) {
  SolverConfig s;
  s.eta = cfg.solver.eta;
  s.cfl = cfg.solver.cfl;
  s.t_end = cfg.solver.t_end;
  s.snapshot_every = cfg.solver.snapshot_every;
  s.scheme = cfg.solver.scheme == "euler" ? TimeScheme::euler : TimeScheme::heun;
  s.validate();
  return s;
}

ScalarField initial_data(const std::string& text, const ChartGrid& grid, const char* key) {
  ScalarField u = sample_expression(Expr::parse(text), grid);
  for (std::size_t node = 0; node < grid.size(); ++node) {
    if (!(u(node) >= 0.0 && u(node) <= 1.0)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "scenario." << key << " = " << u(node) << " at node " << node << " (x1=" << grid.x(node, 0);
      if (grid.dim() == 2) msg << ", x2=" << grid.x(node, 1);
      msg << ") is outside [0, 1]";
      throw ConfigError(msg.str());
    }
  }
  return u;
}

json node_json(const ChartGrid& grid, std::size_t node) {
  json j{{"node", node}, {"x1", grid.x(node, 0)}};
  if (grid.dim() == 2) j["x2"] = grid.x(node, 1);
  return j;
}

}  // namespace

std::unique_ptr<Pipeline> build_pipeline(const RunConfig& cfg) {
  const ChartGrid grid(cfg.grid.d, cfg.grid.n);
  const XiGrid xi(cfg.grid.bins);
  const SolverConfig solver = solver_config(cfg);

  MetricSpec spec;
  if (!cfg.metric.name.empty()) {
    spec = metric_catalog(cfg.metric.name, cfg.grid.d);
  } else {
    spec.name = "table";
    spec.g[0][0] = Expr::parse(cfg.metric.g[0]);
    spec.g[0][1] = Expr::parse(cfg.metric.g[1]);
    spec.g[1][0] = spec.g[0][1];
    spec.g[1][1] = Expr::parse(cfg.metric.g[2]);
  }

  try {
    MetricField metric = build_metric(spec, grid, cfg.metric.lambda_min);
    DiffusionModel dm = DiffusionModel::from_expressions(sigma_exprs(cfg.scenario), metric, xi);
    std::optional<FluxModel> fm;
    if (cfg.scenario.compatible) {
      if (cfg.scenario.stream.empty()) {
        fm = make_compatible_flux(dm, metric, nullptr);
      } else {
        const Expr stream = Expr::parse(cfg.scenario.stream);
        fm = make_compatible_flux(dm, metric, &stream);
      }
    } else {
      std::optional<VectorExprs> df;
      if (cfg.scenario.df) df = VectorExprs{Expr::parse((*cfg.scenario.df)[0]), Expr::parse((*cfg.scenario.df)[1])};
      fm = FluxModel::from_expressions({Expr::parse(cfg.scenario.f[0]), Expr::parse(cfg.scenario.f[1])}, df, grid,
                                       xi);
    }
    ScalarField u0 = initial_data(cfg.scenario.u0, grid, "u0");
    return std::make_unique<Pipeline>(
        Pipeline{grid, xi, std::move(metric), std::move(dm), std::move(*fm), std::move(u0), solver});
  } catch (const EvalError& e) {
    throw ConfigError(std::string("while sampling the scenario: ") + e.what());
  }
}

int cmd_run(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  const auto pl = build_pipeline(cfg);
  const Problem p = pl->problem();
  const auto& dg = cfg.diagnostics;
  fs::create_directories(out);

  const Trajectory tr = run(pl->solver, p, pl->u0);
  log << "run: " << tr.steps << " steps, dt " << short_fmt(tr.dt) << ", t_end " << cfg.solver.t_end << '\n';

  Checks checks;
  const Monitor& m0 = tr.monitors.front();
  const Monitor& m1 = tr.monitors.back();
  const auto [lo, hi] = range_of(tr.monitors);
  if (dg.maximum_principle) {
    checks.at_least("maximum_principle.min", lo, -dg.range_tolerance);
    checks.at_most("maximum_principle.max", hi, 1.0 + dg.range_tolerance);
  }
  const double drift = std::abs(m1.mass - m0.mass);
  checks.at_most("mass_drift", drift, dg.mass_tolerance);

  const EnergyBalance eb = energy_balance(tr, pl->metric);
  checks.at_most("energy_balance.relative", std::abs(eb.relative), dg.energy_tolerance);

  const NuBound nu = nu_bound_check(tr.ledger, pl->u0, pl->metric, dg.nu_factor, dg.nu_absolute);
  checks.add("nu_bound.worst_excess", nu.worst_excess, 0.0, nu.ok, "<=");

  const auto battery = space_time_battery(dg.seed, dg.battery);
  json entropy = json::object();
  double worst_residual = 0.0;
  for (const auto& name : dg.entropies) {
    const WeakResidual r = entropy_residual(tr, entropy_catalog(name), p, battery);
    entropy[name] = residual_json(r);
    worst_residual = std::max(worst_residual, r.max_abs);
  }
  const WeakResidual scheme = scheme_residual(tr, p, battery);
  worst_residual = std::max(worst_residual, scheme.max_abs);

  json chain = json::array();
  for (const auto& text : dg.psi) {
    const double r = chain_rule_residual(tr.final(), xi_function(text), pl->dm, pl->metric);
    chain.push_back({{"psi", text}, {"residual", r}});
  }

  const KineticResidual kin = kinetic_residual(tr, p, kinetic_battery(dg.seed, dg.battery));
  worst_residual = std::max(worst_residual, kin.max_abs);
  if (dg.residual_tolerance >= 0.0) checks.at_most("residuals.max_abs", worst_residual, dg.residual_tolerance);

  json report = header(cfg, "run");
  report["run"] = {{"dt", tr.dt}, {"steps", tr.steps}, {"snapshots", tr.snapshots.size()}};
  report["monitors"] = {{"initial", monitor_json(m0)}, {"final", monitor_json(m1)}, {"min", lo}, {"max", hi},
                        {"mass_drift", drift}, {"total_variation", total_variation(tr.final())}};
  report["energy_balance"] = {{"total_m", eb.total_m},
                              {"total_n", eb.total_n},
                              {"initial_energy", eb.initial_energy},
                              {"final_energy", eb.final_energy},
                              {"residual", eb.residual},
                              {"relative", eb.relative}};
  report["entropy_residuals"] = entropy;
  report["scheme_residual"] = residual_json(scheme);
  report["chain_rule"] = chain;
  report["nu_bound"] = {{"factor", nu.factor},
                        {"absolute", nu.absolute},
                        {"ok", nu.ok},
                        {"ok_at_centers", nu.ok_at_centers},
                        {"worst_excess", nu.worst_excess},
                        {"worst_bin", nu.worst_bin}};
  report["checks"] = checks.items();
  report["ok"] = checks.ok();

  json kreport = header(cfg, "run");
  kreport["kinetic_residual"] = {{"values", kin.values},
                                 {"max_abs", kin.max_abs},
                                 {"ablated", kin.ablated},
                                 {"ablated_max_abs", kin.ablated_max_abs}};
  if (!dg.eps.empty()) {
    const auto rows = friedrichs_commutator(Expr::parse(dg.friedrichs_coefficient), tr.final(), dg.eps,
                                            dg.friedrichs_part == "i" ? FriedrichsPart::i : FriedrichsPart::ii);
    json table = json::array();
    for (const auto& row : rows) table.push_back({{"eps", row.eps}, {"l1", row.l1}});
    kreport["friedrichs"] = {{"part", dg.friedrichs_part}, {"rows", table}};
  }
  if (!dg.delta.empty()) {
    ScalarField phi(pl->grid);
    for (std::size_t node = 0; node < pl->grid.size(); ++node) {
      phi(node) = 1.0 + 0.5 * std::cos(2.0 * std::numbers::pi * pl->grid.x(node, 0));
    }
    const double eps = 4.0 * pl->grid.h();
    json table = json::array();
    for (double delta : dg.delta) {
      table.push_back({{"eps", eps}, {"delta", delta},
                       {"max_abs", dchi_identity_check(tr.final(), phi, pl->xi, eps, delta)}});
    }
    kreport["dchi_identity"] = table;
  }

  write_json(out / "report.json", report);
  write_json(out / "kinetic_report.json", kreport);
  write_monitors(out / "monitors.csv", tr.monitors);
  write_ledger(out / "ledger.csv", tr.ledger, nu);
  dump_snapshots(cfg, out, tr);

  checks.print(log);
  return checks.ok() ? kExitOk : kExitRuntime;
}

int cmd_audit_compat(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  const auto pl = build_pipeline(cfg);
  const auto& dg = cfg.diagnostics;
  fs::create_directories(out);

  const double h = pl->grid.h();
  const double scale = compat_scale(pl->fm, pl->dm, pl->metric, dg.xi_samples);
  const double threshold = dg.audit_factor * h * h * scale;

  Checks checks;
  json rows = json::array();
  log << "audit-compat: threshold " << short_fmt(threshold) << " (" << dg.audit_factor << " h^2 * " << short_fmt(scale)
      << ")\n";
  log << "  xi         linf       l1         node\n";
  for (double xi : dg.xi_samples) {
    const CompatResidual r = compat_residual(pl->fm, pl->dm, pl->metric, xi);
    const bool pass = r.linf <= threshold;
    json row{{"xi", xi}, {"linf", r.linf}, {"l1", r.l1}, {"argmax", node_json(pl->grid, r.argmax)}, {"pass", pass}};
    rows.push_back(row);
    checks.add("compat.xi=" + fmt(xi), r.linf, threshold, pass, "<=");
    log << "  " << std::left << std::setw(10) << xi << ' ' << short_fmt(r.linf) << "  " << short_fmt(r.l1) << "  "
        << r.argmax << "  x1=" << pl->grid.x(r.argmax, 0);
    if (pl->grid.dim() == 2) log << " x2=" << pl->grid.x(r.argmax, 1);
    log << (pass ? "" : "  FAIL") << '\n';
  }

  const PsdAudit psd = psd_audit(pl->dm, pl->metric, dg.psd_directions, dg.seed);
  checks.at_least("psd.min_value", psd.min_value, -1e-12 * (1.0 + pl->dm.max_a_prime_norm()));

  json report = header(cfg, "audit-compat");
  report["threshold"] = threshold;
  report["scale"] = scale;
  report["audit_factor"] = dg.audit_factor;
  report["h"] = h;
  report["rows"] = rows;
  report["psd"] = {{"min_value", psd.min_value},
                   {"node", psd.node},
                   {"edge", psd.edge},
                   {"samples", psd.samples}};
  report["checks"] = checks.items();
  report["ok"] = checks.ok();
  write_json(out / "report.json", report);

  checks.print(log);
  return checks.ok() ? kExitOk : kExitRuntime;
}

int cmd_study_eta(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  const auto pl = build_pipeline(cfg);
  const auto& dg = cfg.diagnostics;
  fs::create_directories(out);
  const std::vector<double> etas = dg.eta_list.empty() ? std::vector<double>{cfg.solver.eta} : dg.eta_list;

  std::vector<ScalarField> finals;
  json runs = json::array();
  std::vector<double> tv;
  for (std::size_t i = 0; i < etas.size(); ++i) {
    SolverConfig s = pl->solver;
    s.eta = etas[i];
    const Trajectory tr = run(s, pl->problem(), pl->u0);
    const auto [lo, hi] = range_of(tr.monitors);
    tv.push_back(total_variation(tr.final()));
    runs.push_back({{"eta", etas[i]},
                    {"dt", tr.dt},
                    {"steps", tr.steps},
                    {"final", monitor_json(tr.monitors.back())},
                    {"min", lo},
                    {"max", hi},
                    {"total_variation", tv.back()}});
    write_monitors(out / ("monitors_eta" + std::to_string(i) + ".csv"), tr.monitors);
    dump_field(cfg, out / "fields", "u_final_eta" + std::to_string(i), tr.final());
    log << "study-eta: eta " << short_fmt(etas[i]) << ", " << tr.steps << " steps, TV " << short_fmt(tv.back()) << '\n';
    finals.push_back(tr.final());
  }

  Checks checks;
  json diffs = json::array();
  std::vector<double> e;
  for (std::size_t i = 0; i + 1 < finals.size(); ++i) {
    ScalarField d = finals[i];
    d -= finals[i + 1];
    e.push_back(integrate_abs(d, pl->metric));
    diffs.push_back({{"eta_a", etas[i]}, {"eta_b", etas[i + 1]}, {"l1", e.back()}});
  }
  json ratios = json::array();
  for (std::size_t i = 0; i + 1 < e.size(); ++i) {
    const double r = e[i] > 0.0 ? e[i + 1] / e[i] : 0.0;
    ratios.push_back(r);
    checks.at_most("cauchy_ratio." + std::to_string(i), r, dg.cauchy_ratio);
  }

  // TV should not increase with eta.
  std::vector<std::size_t> order(etas.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return etas[a] < etas[b]; });
  bool tv_ok = true;
  double tv_worst = 0.0;
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    const double rise = tv[order[k + 1]] - tv[order[k]];
    tv_worst = std::max(tv_worst, rise);
    tv_ok = tv_ok && rise <= 0.0;
  }
  if (dg.tv_order) checks.add("tv_nonincreasing_in_eta", tv_worst, 0.0, tv_ok, "<=");

  json report = header(cfg, "study-eta");
  report["runs"] = runs;
  report["differences"] = diffs;
  report["ratios"] = ratios;
  report["tv_nonincreasing_in_eta"] = tv_ok;
  report["checks"] = checks.items();
  report["ok"] = checks.ok();
  write_json(out / "report.json", report);

  for (const auto& d : diffs) {
    log << "  |u(" << short_fmt(d["eta_a"].get<double>()) << ") - u(" << short_fmt(d["eta_b"].get<double>())
        << ")|_L1 = " << short_fmt(d["l1"].get<double>()) << '\n';
  }
  checks.print(log);
  return checks.ok() ? kExitOk : kExitRuntime;
}

int cmd_uniqueness(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  const auto pl = build_pipeline(cfg);
  const auto& dg = cfg.diagnostics;
  fs::create_directories(out);
  const XiGrid bins(dg.contraction_bins);

  // Snapshots every `multiplier * snapshot_every` steps land on common times.
  auto run_variant = [&](const Variant& v, const ScalarField& u0) {
    SolverConfig s = pl->solver;
    s.scheme = v.scheme;
    s.step_multiplier = v.multiplier;
    s.snapshot_every = pl->solver.snapshot_every * v.multiplier;
    return run(s, pl->problem(), u0);
  };
  auto series_json = [](const std::vector<ContractionPoint>& series) {
    json j = json::array();
    for (const auto& pt : series) j.push_back({{"t", pt.t}, {"forward", pt.forward}, {"backward", pt.backward}});
    return j;
  };

  std::vector<Variant> variants;
  for (const auto& text : dg.variants) variants.push_back(*parse_variant(text));
  const Trajectory base = run_variant(variants.front(), pl->u0);
  write_monitors(out / "monitors.csv", base.monitors);
  dump_snapshots(cfg, out, base);

  Checks checks;
  json pairs = json::array();
  json kpairs = json::array();
  for (std::size_t i = 1; i < variants.size(); ++i) {
    const Trajectory other = run_variant(variants[i], pl->u0);
    const auto series = contraction_series(base, other, pl->metric, bins);
    const double c0 = series.empty() ? 0.0 : std::max(series.front().forward, series.front().backward);
    double worst_excess = -std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (const auto& pt : series) {
      const double allowed = c0 + dg.contraction_c * pt.t * (base.dt + other.dt);
      worst_excess = std::max(worst_excess, std::max(pt.forward, pt.backward) - allowed);
      worst = std::max({worst, pt.forward, pt.backward});
    }
    const std::string label = dg.variants.front() + " vs " + dg.variants[i];
    const double bound = c0 + dg.contraction_c * cfg.solver.t_end * (base.dt + other.dt);
    checks.add("contraction." + label, worst_excess, 0.0, worst_excess <= 0.0, "<=");
    pairs.push_back({{"a", dg.variants.front()},
                     {"b", dg.variants[i]},
                     {"dt_a", base.dt},
                     {"dt_b", other.dt},
                     {"points", series.size()},
                     {"initial", c0},
                     {"max", worst},
                     {"bound_at_t_end", bound},
                     {"worst_excess", worst_excess}});
    kpairs.push_back({{"a", dg.variants.front()}, {"b", dg.variants[i]}, {"series", series_json(series)}});
    log << "uniqueness: " << label << ": max " << short_fmt(worst) << ", bound at T " << short_fmt(bound) << '\n';
  }

  json report = header(cfg, "uniqueness");
  report["contraction_bins"] = dg.contraction_bins;
  report["constant"] = dg.contraction_c;
  report["pairs"] = pairs;

  json kreport = header(cfg, "uniqueness");
  kreport["contraction"] = kpairs;

  if (!cfg.scenario.v0.empty()) {
    const ScalarField v0 = initial_data(cfg.scenario.v0, pl->grid, "v0");
    const Trajectory tv = run_variant(variants.front(), v0);
    const auto series = contraction_series(base, tv, pl->metric, bins);
    ScalarField pos(pl->grid), neg(pl->grid);
    for (std::size_t node = 0; node < pl->grid.size(); ++node) {
      pos(node) = std::max(pl->u0(node) - v0(node), 0.0);
      neg(node) = std::max(v0(node) - pl->u0(node), 0.0);
    }
    const double plus = integrate(pos, pl->metric), minus = integrate(neg, pl->metric);
    report["different_data"] = {{"initial_forward", series.front().forward},
                                {"initial_backward", series.front().backward},
                                {"integral_u0_minus_v0_plus", plus},
                                {"integral_v0_minus_u0_plus", minus},
                                {"final_forward", series.back().forward},
                                {"final_backward", series.back().backward}};
    kreport["different_data"] = series_json(series);
    log << "uniqueness: u0 vs v0: contraction(0) " << short_fmt(series.front().forward) << " vs int (u0-v0)+ "
        << short_fmt(plus) << '\n';
  }

  report["checks"] = checks.items();
  report["ok"] = checks.ok();
  write_json(out / "report.json", report);
  write_json(out / "kinetic_report.json", kreport);

  checks.print(log);
  return checks.ok() ? kExitOk : kExitRuntime;
}

int execute(const Invocation& inv, std::ostream& log, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = load_config(inv.config, inv.overrides);
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  const fs::path out = inv.out.empty() ? cfg.output.dir : inv.out;
  try {
    if (inv.command == "run") return cmd_run(cfg, out, log);
    if (inv.command == "audit-compat") return cmd_audit_compat(cfg, out, log);
    if (inv.command == "study-eta") return cmd_study_eta(cfg, out, log);
    if (inv.command == "uniqueness") return cmd_uniqueness(cfg, out, log);
    err << "unknown command '" << inv.command << "'\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const MetricError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ParseError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace riemdiff::cli
