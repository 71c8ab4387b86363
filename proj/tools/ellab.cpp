#include "ellab/error.hpp"
#include "ellab/report.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  bool no_plots = false;
  bool no_tables = false;
  bool print_json = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-c,--config", c.config, "TOML or JSON run configuration")->check(CLI::ExistingFile);
  cmd->add_option("-o,--out", c.out, "Output directory (default: the config's output)");
  cmd->add_option("--seed", c.seed, "Override the config seed");
  cmd->add_option("-j,--workers", c.workers, "Items run concurrently")->check(CLI::PositiveNumber);
  cmd->add_flag("--no-plots", c.no_plots, "Skip SVG plots");
  cmd->add_flag("--no-tables", c.no_tables, "Skip CSV tables");
  cmd->add_flag("--json", c.print_json, "Also print report.json to stdout");
}

int execute(const Common& c, ellab::RunOptions options, bool default_when_missing) {
  ellab::RunConfig config;
  if (!c.config.empty()) config = ellab::load_config(c.config);
  else if (default_when_missing) config = ellab::default_config();
  else ellab::fail(ellab::ErrorKind::Configuration, "--config is required for this command");
  options.seed = c.seed;
  options.workers = c.workers;
  const ellab::Report report = ellab::run(config, options);
  const std::string dir = c.out.empty() ? config.output_dir : c.out;
  ellab::emit(report, dir, {!c.no_tables, !c.no_plots});
  for (const auto& item : report.items) {
    std::printf("%3zu  %-6s  %-28s  %-16s", item.index, item.kind.c_str(), item.name.c_str(), item.status.c_str());
    if (item.verdict)
      std::printf("  violation=%.3g tol=%.3g", item.verdict->max_violation, item.verdict->tolerance);
    if (!item.message.empty() && item.status != "pass") std::printf("  %s", item.message.c_str());
    std::printf("\n");
  }
  if (c.print_json) std::cout << ellab::report_to_json(report);
  std::fprintf(stderr, "wrote %s/report.json\n", dir.c_str());
  return report.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical experiments for Yukawa-type equations on the unit ball"};
  app.set_version_flag("--version", std::string(ellab::kVersion));
  app.require_subcommand(1);

  Common solve_opts, norms_opts, verify_opts, report_opts;
  std::string theorem;

  auto* solve = app.add_subcommand("solve", "Solve the configured boundary value problems");
  add_common(solve, solve_opts);
  auto* norms = app.add_subcommand("norms", "Evaluate the configured norms and functionals");
  add_common(norms, norms_opts);
  auto* verify = app.add_subcommand("verify", "Run the configured theorem checks (defaults without --config)");
  add_common(verify, verify_opts);
  verify->add_option("-t,--theorem", theorem, "Only checks with this theorem id")
      ->check(CLI::IsMember(ellab::theorem_ids()));
  auto* report = app.add_subcommand("report", "Run everything in the configuration");
  add_common(report, report_opts);
  auto* list = app.add_subcommand("theorems", "List the accepted theorem ids");
  auto* defaults = app.add_subcommand("default-config", "Print the built-in verification config as JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*list) {
      for (const auto& id : ellab::theorem_ids()) std::printf("%s\n", id.c_str());
      return 0;
    }
    if (*defaults) {
      std::cout << ellab::config_to_json(ellab::default_config()) << "\n";
      return 0;
    }
    if (*solve) return execute(solve_opts, {true, false, false, {}, {}, {}}, false);
    if (*norms) return execute(norms_opts, {false, true, false, {}, {}, {}}, false);
    if (*verify) return execute(verify_opts, {false, false, true, theorem, {}, {}}, true);
    return execute(report_opts, {}, false);
  } catch (const ellab::Error& e) {
    std::fprintf(stderr, "ellab: %s: %s\n", std::string(ellab::to_string(e.kind())).c_str(), e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "ellab: %s\n", e.what());
    return 1;
  }
}
