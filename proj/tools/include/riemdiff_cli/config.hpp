#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "riemdiff/solver.hpp"

namespace riemdiff::cli {

// One `key = value` entry. A value is a comma-separated list of items; items
// in double quotes keep their text verbatim (expressions), bare items are
// trimmed.
struct IniEntry {
  std::vector<std::string> items;
  std::vector<bool> quoted;
  int line = 0;
  std::string origin;  // file name or "--override"
};

class IniDocument {
 public:
  // Throws ConfigError "<origin>:<line>: ..." on malformed input.
  static IniDocument parse(std::string_view text, const std::string& origin);

  // `section.key=value`; replaces any existing entry.
  void apply_override(std::string_view assignment);

  const IniEntry* find(const std::string& section, const std::string& key) const;
  const std::map<std::string, std::map<std::string, IniEntry>>& sections() const noexcept { return sections_; }

 private:
  void set(const std::string& section, const std::string& key, std::string_view value, int line,
           const std::string& origin);
  std::map<std::string, std::map<std::string, IniEntry>> sections_;
};

struct GridBlock {
  int d = 1;
  int n = 128;
  int bins = 64;
};

struct MetricBlock {
  // Catalog name; empty when the table g11, g12, g22 is given instead.
  std::string name = "euclidean";
  std::array<std::string, 3> g;  // g11, g12, g22
  double lambda_min = 1e-6;
};

struct ScenarioBlock {
  std::array<std::string, 4> sigma{"0", "0", "0", "0"};  // sigma11, sigma12, sigma21, sigma22
  std::array<std::string, 2> f{"0", "0"};
  std::optional<std::array<std::string, 2>> df;
  bool compatible = false;
  std::string stream;
  std::string u0 = "0.5";
  std::string v0;  // second initial datum for the uniqueness command
};

struct SolverBlock {
  double eta = 1e-2;
  double cfl = 0.4;
  double t_end = 0.1;
  std::string scheme = "heun";
  int snapshot_every = 1;
};

struct DiagnosticsBlock {
  std::vector<std::string> entropies{"linear", "quadratic"};
  std::vector<std::string> psi{"1", "xi"};
  std::vector<double> eps;    // Friedrichs commutator widths
  std::vector<double> delta;  // xi widths for the d_xi chi identity
  std::uint64_t seed = 7;
  int battery = 5;

  bool maximum_principle = true;
  double range_tolerance = 1e-6;
  double mass_tolerance = 1e-6;
  double energy_tolerance = 0.05;
  double residual_tolerance = -1.0;  // < 0: residuals reported, not checked
  double nu_factor = 1.1;
  double nu_absolute = 0.0;

  std::vector<double> xi_samples{0.0, 0.5, 1.0};
  double audit_factor = 10.0;
  int psd_directions = 8;

  std::vector<double> eta_list;
  double cauchy_ratio = 0.9;
  bool tv_order = false;

  std::vector<std::string> variants{"heun:1", "heun:2"};
  int contraction_bins = 256;
  double contraction_c = 1.0;

  std::string friedrichs_coefficient = "1 + 0.5*sin(2*pi*x1)";
  std::string friedrichs_part = "ii";
};

struct OutputBlock {
  std::filesystem::path dir = "out";
  std::string format = "csv";  // csv, raw or none
  int dump_every = 0;          // extra snapshot dumps every k kept snapshots; 0 = first and last only
};

// "scheme:multiplier", e.g. "heun:2" = Heun with half the stable step.
struct Variant {
  TimeScheme scheme = TimeScheme::heun;
  int multiplier = 1;
};
std::optional<Variant> parse_variant(std::string_view text);

struct RunConfig {
  GridBlock grid;
  MetricBlock metric;
  ScenarioBlock scenario;
  SolverBlock solver;
  DiagnosticsBlock diagnostics;
  OutputBlock output;

  // Resolved key/value echo, in section order, for the reports.
  std::vector<std::pair<std::string, std::string>> echo;
};

// Typed view of a document. Unknown sections or keys, bad numbers, ranges and
// unparsable expressions throw ConfigError naming origin and line.
RunConfig to_run_config(const IniDocument& doc);

RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

}  // namespace riemdiff::cli
