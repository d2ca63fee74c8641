#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "riemdiff_cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace riemdiff::cli;

  CLI::App app{"Degenerate diffusion on periodic charts: runs, audits and studies from INI configs"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);

  Invocation inv;
  std::string out;
  auto add = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("config", inv.config, "Scenario config (INI)")->required();
    sub->add_option("--out,-o", out, "Output directory (default: output.dir from the config)");
    sub->add_option("--override,-D", inv.overrides, "section.key=value, applied after the file; repeatable")
        ->allow_extra_args(false);
    sub->callback([&inv, name] { inv.command = name; });
  };
  add("run", "Solve and write report.json, monitors.csv, ledger.csv, kinetic_report.json and field dumps");
  add("audit-compat", "Tabulate div f - Div Div A over diagnostics.xi_samples");
  add("study-eta", "Run over diagnostics.eta_list and tabulate L1 differences of the final states");
  add("uniqueness", "Contraction series between run variants (diagnostics.variants) and, with v0, between data");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  inv.out = out;
  return execute(inv, std::cout, std::cerr);
}
