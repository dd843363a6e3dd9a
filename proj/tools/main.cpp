// fracwave — command line driver for the space-fractional wave solver.
//
// Subcommands:
//   solve          solve once and emit nodal snapshots as CSV
//   converge       run a ladder of spatial resolutions and emit a
//                  convergence table as CSV
//   energy         solve once and emit the discrete energy history as CSV
//   dump-matrices  write the assembled FEM matrices as coordinate files
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 4 i/o failure.
//
// Part of fracwave, released under the MIT license; see LICENSE at the
// repository root.
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fracwave/errors.hpp"
#include "fracwave/experiment.hpp"
#include "fracwave/version.hpp"

namespace {

struct CliState {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_path;
  bool out_given = false;
  int threads = 0;
  unsigned long seed = 0;
  bool seed_given = false;
  std::string dump_dir = "matrices";
};

void add_common_options(CLI::App* sub, CliState& st) {
  sub->add_option("--config", st.config_path,
                  "configuration file of key=value lines");
  sub->add_option("--set", st.overrides,
                  "override a single configuration entry, key=value "
                  "(repeatable)");
  sub->add_option("--threads", st.threads,
                  "worker threads for per-mode solves");
  sub->add_option("--seed", st.seed, "seed for the spectral-bound iteration")
      ->each([&st](const std::string&) { st.seed_given = true; });
}

fracwave::ExperimentConfig build_config(const CliState& st) {
  fracwave::ExperimentConfig cfg;
  if (!st.config_path.empty()) {
    cfg = fracwave::parse_config_file(st.config_path);
  }
  for (const std::string& kv : st.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw fracwave::ConfigError("--set expects key=value, got '" + kv + "'");
    }
    fracwave::apply_config_entry(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (st.out_given) cfg.out = st.out_path;
  if (st.threads > 0) cfg.threads = st.threads;
  if (st.seed_given) cfg.seed = st.seed;
  return cfg;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"solver for the space-fractional wave equation via the "
               "truncated extension problem"};
  app.set_version_flag("--version",
                       std::string("fracwave ") + fracwave::version_string);
  app.require_subcommand(1);

  CliState st;
  CLI::App* solve = app.add_subcommand(
      "solve", "solve once and write nodal snapshots as CSV");
  CLI::App* converge = app.add_subcommand(
      "converge", "run a resolution ladder and write a convergence table");
  CLI::App* energy = app.add_subcommand(
      "energy", "solve once and write the discrete energy history");
  CLI::App* dump = app.add_subcommand(
      "dump-matrices", "write assembled matrices as coordinate files");
  for (CLI::App* sub : {solve, converge, energy, dump}) {
    add_common_options(sub, st);
  }
  for (CLI::App* sub : {solve, converge, energy}) {
    sub->add_option("--out", st.out_path,
                    "output CSV path (default: stdout)")
        ->each([&st](const std::string&) { st.out_given = true; });
  }
  dump->add_option("--dir", st.dump_dir,
                   "output directory for the matrix files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? fracwave::exit_success : fracwave::exit_config_error;
  }

  const fracwave::ExperimentConfig cfg = build_config(st);
  if (app.got_subcommand(solve)) {
    const fracwave::SingleRun run = fracwave::run_single(cfg);
    fracwave::write_output(cfg.out, fracwave::single_csv(run));
  } else if (app.got_subcommand(converge)) {
    const fracwave::ConvergenceTable table = fracwave::run_convergence(cfg);
    fracwave::write_output(cfg.out, fracwave::convergence_csv(table));
    std::cerr << "fitted slope: " << table.fitted_slope() << "\n";
  } else if (app.got_subcommand(energy)) {
    const fracwave::EnergyAudit audit = fracwave::run_energy_audit(cfg);
    fracwave::write_output(cfg.out, fracwave::energy_csv(audit));
    std::cerr << "relative drift: " << audit.drift
              << ", min energy: " << audit.min_energy << "\n";
  } else {
    fracwave::dump_matrices(cfg, st.dump_dir);
    std::cerr << "matrices written to " << st.dump_dir << "\n";
  }
  return fracwave::exit_success;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const fracwave::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fracwave::exit_config_error;
  } catch (const fracwave::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fracwave::exit_io_error;
  } catch (const fracwave::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fracwave::exit_numerical_error;
  } catch (const std::domain_error& e) {
    std::cerr << "error: invalid parameter: " << e.what() << "\n";
    return fracwave::exit_config_error;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: invalid parameter: " << e.what() << "\n";
    return fracwave::exit_config_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fracwave::exit_numerical_error;
  }
}
