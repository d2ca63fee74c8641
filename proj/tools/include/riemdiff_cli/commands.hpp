#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "riemdiff/metric.hpp"
#include "riemdiff/model.hpp"
#include "riemdiff/solver.hpp"
#include "riemdiff_cli/config.hpp"

namespace riemdiff::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

std::string version_string();

// Grid, metric, coefficients and initial data built from a config.
struct Pipeline {
  ChartGrid grid;
  XiGrid xi;
  MetricField metric;
  DiffusionModel dm;
  FluxModel fm;
  ScalarField u0;
  SolverConfig solver;

  Problem problem() const { return {metric, fm, dm}; }
};

// Sampling errors (domain errors in coefficient expressions, u0 outside
// [0,1], non-SPD metric) are raised as ConfigError or MetricError.
std::unique_ptr<Pipeline> build_pipeline(const RunConfig& cfg);

// Each command writes its files under `out` (created if missing), a summary
// to `log`, and returns 0 when every check passes, 1 otherwise. Exceptions
// propagate.
int cmd_run(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_audit_compat(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_study_eta(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_uniqueness(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);

struct Invocation {
  std::string command;  // run, audit-compat, study-eta, uniqueness
  std::filesystem::path config;
  std::vector<std::string> overrides;
  std::filesystem::path out;  // empty: output.dir from the config
};

// Loads the config, dispatches and maps exceptions to exit codes; diagnostics
// go to `err`.
int execute(const Invocation& inv, std::ostream& log, std::ostream& err);

}  // namespace riemdiff::cli
