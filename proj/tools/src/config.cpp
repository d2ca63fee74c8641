#include "riemdiff_cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "riemdiff/entropy.hpp"
#include "riemdiff/error.hpp"
#include "riemdiff/expr.hpp"
#include "riemdiff/metric.hpp"

namespace riemdiff::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

bool is_name(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

// Splits a value into items; quotes protect commas and comment characters.
void split_items(std::string_view value, IniEntry& entry) {
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < value.size() && (value[pos] == ' ' || value[pos] == '\t')) ++pos;
  };
  skip();
  if (pos == value.size() || value[pos] == '#' || value[pos] == ';') {
    fail(entry.origin, entry.line, "missing value");
  }
  while (true) {
    skip();
    if (pos < value.size() && value[pos] == '"') {
      const auto close = value.find('"', pos + 1);
      if (close == std::string_view::npos) fail(entry.origin, entry.line, "unterminated quoted value");
      entry.items.emplace_back(value.substr(pos + 1, close - pos - 1));
      entry.quoted.push_back(true);
      pos = close + 1;
      skip();
    } else {
      const auto end = value.find_first_of(",#;", pos);
      const auto item = trim(value.substr(pos, end == std::string_view::npos ? value.size() - pos : end - pos));
      if (item.empty()) fail(entry.origin, entry.line, "empty list item");
      if (item.find('"') != std::string_view::npos) fail(entry.origin, entry.line, "stray quote in value");
      entry.items.emplace_back(item);
      entry.quoted.push_back(false);
      pos = end == std::string_view::npos ? value.size() : end;
    }
    if (pos == value.size() || value[pos] == '#' || value[pos] == ';') return;
    if (value[pos] != ',') fail(entry.origin, entry.line, "expected ',' between list items");
    ++pos;
  }
}

// Typed reads from one section; remembers which keys were consumed.
class Reader {
 public:
  Reader(const IniDocument& doc, RunConfig& cfg) : doc_(doc), cfg_(cfg) {}

  const IniEntry* entry(const std::string& sec, const std::string& key) {
    used_.insert(sec + "." + key);
    const IniEntry* e = doc_.find(sec, key);
    if (e != nullptr) {
      std::string text;
      for (std::size_t i = 0; i < e->items.size(); ++i) {
        if (i) text += ", ";
        text += e->quoted[i] ? "\"" + e->items[i] + "\"" : e->items[i];
      }
      cfg_.echo.emplace_back(sec + "." + key, text);
    }
    return e;
  }

  const IniEntry* single(const std::string& sec, const std::string& key) {
    const IniEntry* e = entry(sec, key);
    if (e != nullptr && e->items.size() != 1) fail(e->origin, e->line, key + ": expected a single value");
    return e;
  }

  static double to_double(const IniEntry& e, std::size_t i, const std::string& key) {
    const std::string& s = e.items[i];
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || e.quoted[i]) {
      fail(e.origin, e.line, key + ": '" + s + "' is not a number");
    }
    return v;
  }

  void number(const std::string& sec, const std::string& key, double& out) {
    if (const IniEntry* e = single(sec, key)) out = to_double(*e, 0, key);
  }

  void integer(const std::string& sec, const std::string& key, int& out) {
    if (const IniEntry* e = single(sec, key)) {
      const std::string& s = e->items[0];
      int v = 0;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size() || e->quoted[0]) {
        fail(e->origin, e->line, key + ": '" + s + "' is not an integer");
      }
      out = v;
    }
  }

  void unsigned64(const std::string& sec, const std::string& key, std::uint64_t& out) {
    if (const IniEntry* e = single(sec, key)) {
      const std::string& s = e->items[0];
      std::uint64_t v = 0;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size()) {
        fail(e->origin, e->line, key + ": '" + s + "' is not a non-negative integer");
      }
      out = v;
    }
  }

  void boolean(const std::string& sec, const std::string& key, bool& out) {
    if (const IniEntry* e = single(sec, key)) {
      const std::string& s = e->items[0];
      if (s == "true" || s == "yes" || s == "on" || s == "1") out = true;
      else if (s == "false" || s == "no" || s == "off" || s == "0") out = false;
      else fail(e->origin, e->line, key + ": '" + s + "' is not a boolean");
    }
  }

  void word(const std::string& sec, const std::string& key, std::string& out) {
    if (const IniEntry* e = single(sec, key)) out = e->items[0];
  }

  void numbers(const std::string& sec, const std::string& key, std::vector<double>& out) {
    if (const IniEntry* e = entry(sec, key)) {
      out.clear();
      for (std::size_t i = 0; i < e->items.size(); ++i) out.push_back(to_double(*e, i, key));
    }
  }

  void words(const std::string& sec, const std::string& key, std::vector<std::string>& out) {
    if (const IniEntry* e = entry(sec, key)) out = e->items;
  }

  // Quoted or bare expression text, parsed once and checked for variables.
  void expression(const std::string& sec, const std::string& key, std::string& out,
                  const std::set<std::string>& allowed) {
    if (const IniEntry* e = single(sec, key)) {
      check_expression(*e, e->items[0], key, allowed);
      out = e->items[0];
    }
  }

  void expressions(const std::string& sec, const std::string& key, std::vector<std::string>& out,
                   const std::set<std::string>& allowed) {
    if (const IniEntry* e = entry(sec, key)) {
      for (const auto& item : e->items) check_expression(*e, item, key, allowed);
      out = e->items;
    }
  }

  static void check_expression(const IniEntry& e, const std::string& text, const std::string& key,
                               const std::set<std::string>& allowed) {
    Expr parsed;
    try {
      parsed = Expr::parse(text);
    } catch (const ParseError& err) {
      fail(e.origin, e.line, key + ": " + err.what());
    }
    for (const ExprNode& n : parsed.nodes()) {
      if (n.kind == NodeKind::variable && n.name != "pi" && !allowed.count(n.name)) {
        fail(e.origin, e.line, key + ": variable '" + n.name + "' is not allowed here");
      }
    }
  }

  void reject_unknown() const {
    for (const auto& [sec, keys] : doc_.sections()) {
      for (const auto& [key, e] : keys) {
        if (!used_.count(sec + "." + key)) fail(e.origin, e.line, "unknown key '" + key + "' in [" + sec + "]");
      }
    }
  }

 private:
  const IniDocument& doc_;
  RunConfig& cfg_;
  std::set<std::string> used_;
};

const IniEntry* first_entry(const IniDocument& doc, const std::string& sec, const std::string& key) {
  return doc.find(sec, key);
}

[[noreturn]] void fail_at(const IniDocument& doc, const std::string& sec, const std::string& key,
                          const std::string& msg) {
  if (const IniEntry* e = first_entry(doc, sec, key)) fail(e->origin, e->line, msg);
  throw ConfigError(msg);
}

}  // namespace

IniDocument IniDocument::parse(std::string_view text, const std::string& origin) {
  IniDocument doc;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line[0] == '[') {
      const auto close = line.find(']');
      if (close == std::string_view::npos) fail(origin, line_no, "missing ']' in section header");
      const auto rest = trim(line.substr(close + 1));
      if (!rest.empty() && rest[0] != '#' && rest[0] != ';') fail(origin, line_no, "text after section header");
      const auto name = trim(line.substr(1, close - 1));
      if (!is_name(name)) fail(origin, line_no, "bad section name '" + std::string(name) + "'");
      section = std::string(name);
      doc.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(origin, line_no, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    if (!is_name(key)) fail(origin, line_no, "bad key '" + std::string(key) + "'");
    if (section.empty()) fail(origin, line_no, "key '" + std::string(key) + "' outside of any section");
    if (doc.find(section, std::string(key)) != nullptr) {
      fail(origin, line_no, "duplicate key '" + std::string(key) + "' in [" + section + "]");
    }
    doc.set(section, std::string(key), line.substr(eq + 1), line_no, origin);
  }
  return doc;
}

void IniDocument::apply_override(std::string_view assignment) {
  const std::string origin = "--override";
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) fail(origin, 1, "expected section.key=value, got '" + std::string(assignment) + "'");
  const auto path = trim(assignment.substr(0, eq));
  const auto dot = path.find('.');
  if (dot == std::string_view::npos) fail(origin, 1, "expected section.key=value, got '" + std::string(assignment) + "'");
  const auto sec = path.substr(0, dot);
  const auto key = path.substr(dot + 1);
  if (!is_name(sec) || !is_name(key)) fail(origin, 1, "bad override target '" + std::string(path) + "'");
  sections_[std::string(sec)].erase(std::string(key));
  set(std::string(sec), std::string(key), assignment.substr(eq + 1), 1, origin);
}

void IniDocument::set(const std::string& section, const std::string& key, std::string_view value, int line,
                      const std::string& origin) {
  IniEntry e;
  e.line = line;
  e.origin = origin;
  split_items(value, e);
  sections_[section][key] = std::move(e);
}

const IniEntry* IniDocument::find(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  const auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

RunConfig to_run_config(const IniDocument& doc) {
  static const std::set<std::string> known{"grid", "metric", "scenario", "solver", "diagnostics", "output"};
  for (const auto& [sec, keys] : doc.sections()) {
    if (!known.count(sec)) {
      const int line = keys.empty() ? 0 : keys.begin()->second.line;
      const std::string origin = keys.empty() ? "config" : keys.begin()->second.origin;
      fail(origin, line, "unknown section [" + sec + "]");
    }
  }

  RunConfig cfg;
  Reader r(doc, cfg);
  const std::set<std::string> x_vars{"x1", "x2"};
  const std::set<std::string> xxi_vars{"x1", "x2", "xi"};
  const std::set<std::string> xi_vars{"xi"};

  r.integer("grid", "d", cfg.grid.d);
  r.integer("grid", "n", cfg.grid.n);
  r.integer("grid", "bins", cfg.grid.bins);
  if (cfg.grid.d != 1 && cfg.grid.d != 2) fail_at(doc, "grid", "d", "grid.d must be 1 or 2");
  if (cfg.grid.n < 16 || cfg.grid.n > 4096 || (cfg.grid.n & (cfg.grid.n - 1)) != 0) {
    fail_at(doc, "grid", "n", "grid.n must be a power of two in [16, 4096]");
  }
  if (cfg.grid.d == 2 && cfg.grid.n > 512) fail_at(doc, "grid", "n", "grid.n must be <= 512 when d = 2");
  if (cfg.grid.bins < 16 || cfg.grid.bins > 4096) fail_at(doc, "grid", "bins", "grid.bins must be in [16, 4096]");

  const bool has_table = doc.find("metric", "g11") != nullptr;
  if (has_table) {
    if (doc.find("metric", "name") != nullptr) fail_at(doc, "metric", "name", "give either metric.name or g11..g22");
    cfg.metric.name.clear();
    cfg.metric.g = {"1", "0", "1"};
    r.expression("metric", "g11", cfg.metric.g[0], x_vars);
    r.expression("metric", "g12", cfg.metric.g[1], x_vars);
    r.expression("metric", "g22", cfg.metric.g[2], x_vars);
  } else {
    r.word("metric", "name", cfg.metric.name);
    const auto names = metric_catalog_names();
    if (std::find(names.begin(), names.end(), cfg.metric.name) == names.end()) {
      fail_at(doc, "metric", "name", "unknown metric '" + cfg.metric.name + "'");
    }
    try {
      metric_catalog(cfg.metric.name, cfg.grid.d);
    } catch (const ConfigError& e) {
      fail_at(doc, "metric", "name", e.what());
    }
  }
  r.number("metric", "lambda_min", cfg.metric.lambda_min);
  if (!(cfg.metric.lambda_min > 0.0)) fail_at(doc, "metric", "lambda_min", "metric.lambda_min must be > 0");

  auto& sc = cfg.scenario;
  r.expression("scenario", "sigma11", sc.sigma[0], xxi_vars);
  r.expression("scenario", "sigma12", sc.sigma[1], xxi_vars);
  r.expression("scenario", "sigma21", sc.sigma[2], xxi_vars);
  r.expression("scenario", "sigma22", sc.sigma[3], xxi_vars);
  r.boolean("scenario", "compatible", sc.compatible);
  r.expression("scenario", "stream", sc.stream, xxi_vars);
  r.expression("scenario", "f1", sc.f[0], xxi_vars);
  r.expression("scenario", "f2", sc.f[1], xxi_vars);
  if (doc.find("scenario", "df1") != nullptr || doc.find("scenario", "df2") != nullptr) {
    std::array<std::string, 2> df{"0", "0"};
    r.expression("scenario", "df1", df[0], xxi_vars);
    r.expression("scenario", "df2", df[1], xxi_vars);
    sc.df = df;
  }
  r.expression("scenario", "u0", sc.u0, x_vars);
  r.expression("scenario", "v0", sc.v0, x_vars);
  if (sc.compatible && (doc.find("scenario", "f1") || doc.find("scenario", "f2") || sc.df)) {
    fail_at(doc, "scenario", "compatible", "scenario.compatible excludes explicit f1, f2, df1, df2");
  }
  if (!sc.stream.empty() && !sc.compatible) fail_at(doc, "scenario", "stream", "scenario.stream requires compatible = true");
  if (!sc.stream.empty() && cfg.grid.d != 2) fail_at(doc, "scenario", "stream", "scenario.stream requires d = 2");

  auto& so = cfg.solver;
  r.number("solver", "eta", so.eta);
  r.number("solver", "cfl", so.cfl);
  r.number("solver", "t_end", so.t_end);
  r.word("solver", "scheme", so.scheme);
  r.integer("solver", "snapshot_every", so.snapshot_every);
  if (!(so.eta > 0.0)) fail_at(doc, "solver", "eta", "solver.eta must be > 0");
  if (!(so.cfl > 0.0 && so.cfl <= 1.0)) fail_at(doc, "solver", "cfl", "solver.cfl must be in (0, 1]");
  if (!(so.t_end > 0.0 && so.t_end <= 100.0)) fail_at(doc, "solver", "t_end", "solver.t_end must be in (0, 100]");
  if (so.scheme != "heun" && so.scheme != "euler") fail_at(doc, "solver", "scheme", "solver.scheme must be heun or euler");
  if (so.snapshot_every < 1) fail_at(doc, "solver", "snapshot_every", "solver.snapshot_every must be >= 1");

  auto& dg = cfg.diagnostics;
  r.words("diagnostics", "entropies", dg.entropies);
  {
    const auto names = entropy_catalog_names();
    for (const auto& e : dg.entropies) {
      if (std::find(names.begin(), names.end(), e) == names.end()) {
        fail_at(doc, "diagnostics", "entropies", "unknown entropy '" + e + "'");
      }
    }
  }
  r.expressions("diagnostics", "psi", dg.psi, xi_vars);
  r.numbers("diagnostics", "eps", dg.eps);
  r.numbers("diagnostics", "delta", dg.delta);
  r.unsigned64("diagnostics", "seed", dg.seed);
  r.integer("diagnostics", "battery", dg.battery);
  r.boolean("diagnostics", "maximum_principle", dg.maximum_principle);
  r.number("diagnostics", "range_tolerance", dg.range_tolerance);
  r.number("diagnostics", "mass_tolerance", dg.mass_tolerance);
  r.number("diagnostics", "energy_tolerance", dg.energy_tolerance);
  r.number("diagnostics", "residual_tolerance", dg.residual_tolerance);
  r.number("diagnostics", "nu_factor", dg.nu_factor);
  r.number("diagnostics", "nu_absolute", dg.nu_absolute);
  r.numbers("diagnostics", "xi_samples", dg.xi_samples);
  r.number("diagnostics", "audit_factor", dg.audit_factor);
  r.integer("diagnostics", "psd_directions", dg.psd_directions);
  r.numbers("diagnostics", "eta_list", dg.eta_list);
  r.number("diagnostics", "cauchy_ratio", dg.cauchy_ratio);
  r.boolean("diagnostics", "tv_order", dg.tv_order);
  r.words("diagnostics", "variants", dg.variants);
  r.integer("diagnostics", "contraction_bins", dg.contraction_bins);
  r.number("diagnostics", "contraction_c", dg.contraction_c);
  r.expression("diagnostics", "friedrichs_coefficient", dg.friedrichs_coefficient, x_vars);
  r.word("diagnostics", "friedrichs_part", dg.friedrichs_part);

  if (dg.battery < 1 || dg.battery > 64) fail_at(doc, "diagnostics", "battery", "diagnostics.battery must be in [1, 64]");
  const double h = 1.0 / cfg.grid.n;
  for (double e : dg.eps) {
    if (!(e >= 2.0 * h && e < 0.5)) fail_at(doc, "diagnostics", "eps", "diagnostics.eps entries must be in [2h, 0.5)");
  }
  for (double e : dg.delta) {
    if (!(e >= 2.0 / cfg.grid.bins && e < 0.5)) {
      fail_at(doc, "diagnostics", "delta", "diagnostics.delta entries must be in [2 dxi, 0.5)");
    }
  }
  for (double x : dg.xi_samples) {
    if (!(x >= 0.0 && x <= 1.0)) fail_at(doc, "diagnostics", "xi_samples", "diagnostics.xi_samples must lie in [0, 1]");
  }
  if (dg.xi_samples.empty()) fail_at(doc, "diagnostics", "xi_samples", "diagnostics.xi_samples is empty");
  for (double e : dg.eta_list) {
    if (!(e > 0.0)) fail_at(doc, "diagnostics", "eta_list", "diagnostics.eta_list entries must be > 0");
  }
  if (!(dg.audit_factor > 0.0)) fail_at(doc, "diagnostics", "audit_factor", "diagnostics.audit_factor must be > 0");
  if (dg.psd_directions < 1) fail_at(doc, "diagnostics", "psd_directions", "diagnostics.psd_directions must be >= 1");
  if (!(dg.nu_factor >= 1.0)) fail_at(doc, "diagnostics", "nu_factor", "diagnostics.nu_factor must be >= 1");
  if (dg.contraction_bins < 16 || dg.contraction_bins > 4096) {
    fail_at(doc, "diagnostics", "contraction_bins", "diagnostics.contraction_bins must be in [16, 4096]");
  }
  if (!(dg.contraction_c >= 0.0)) fail_at(doc, "diagnostics", "contraction_c", "diagnostics.contraction_c must be >= 0");
  if (dg.friedrichs_part != "i" && dg.friedrichs_part != "ii") {
    fail_at(doc, "diagnostics", "friedrichs_part", "diagnostics.friedrichs_part must be i or ii");
  }
  for (const auto& v : dg.variants) {
    if (!parse_variant(v)) fail_at(doc, "diagnostics", "variants", "bad variant '" + v + "' (expected scheme:multiplier)");
  }
  if (dg.variants.empty()) fail_at(doc, "diagnostics", "variants", "diagnostics.variants is empty");

  auto& out = cfg.output;
  std::string dir = out.dir.string();
  r.word("output", "dir", dir);
  out.dir = dir;
  r.word("output", "format", out.format);
  r.integer("output", "dump_every", out.dump_every);
  if (out.format != "csv" && out.format != "raw" && out.format != "none") {
    fail_at(doc, "output", "format", "output.format must be csv, raw or none");
  }
  if (out.dump_every < 0) fail_at(doc, "output", "dump_every", "output.dump_every must be >= 0");

  r.reject_unknown();
  return cfg;
}

std::optional<Variant> parse_variant(std::string_view text) {
  const auto colon = text.find(':');
  const auto scheme = trim(text.substr(0, colon));
  Variant v;
  if (scheme == "heun") v.scheme = TimeScheme::heun;
  else if (scheme == "euler") v.scheme = TimeScheme::euler;
  else return std::nullopt;
  if (colon != std::string_view::npos) {
    const auto m = trim(text.substr(colon + 1));
    const auto [ptr, ec] = std::from_chars(m.data(), m.data() + m.size(), v.multiplier);
    if (ec != std::errc() || ptr != m.data() + m.size() || v.multiplier < 1 || v.multiplier > 64) return std::nullopt;
  }
  return v;
}

RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  IniDocument doc = IniDocument::parse(ss.str(), path.filename().string());
  for (const auto& o : overrides) doc.apply_override(o);
  return to_run_config(doc);
}

}  // namespace riemdiff::cli
