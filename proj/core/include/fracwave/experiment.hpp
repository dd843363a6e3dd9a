// Part of fracwave, released under the MIT license; see LICENSE at the
// repository root.
//
// Configuration-driven experiment runners: mesh-refinement convergence
// studies against the semi-analytic modal reference, discrete-energy
// audits, single solves with snapshot output, and matrix dumps.  All
// output is plain CSV / coordinate text, written to a file or stdout.
// Runs are deterministic: repeating a configuration reproduces every
// output byte except the wall-clock column.
#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fracwave/modal_solution.hpp"
#include "fracwave/omega_fem.hpp"
#include "fracwave/spectral_basis.hpp"
#include "fracwave/time_stepping.hpp"

namespace fracwave {

enum class Scheme { leapfrog, trapezoidal };

// How the step size is chosen from the mesh size h_T:
//   fixed       dt = dt_value
//   half_power  dt = (h_T/2)^(1/2)
//   s_power     dt = (h_T/2)^(max(1/2, s))
//   linear      dt = dt_coeff * h_T
// The realized step is dt = T / K with K = max(2, ceil(T / dt_target)),
// i.e. rounded down to hit T exactly.
enum class DtRule { fixed, half_power, s_power, linear };

// Built-in problem data:
//   manufactured_1d  interval; u = sin(t) sin(pi x) manufactured through
//                    the forcing f = (pi^(2s) - 1) sin(t) sin(pi x)
//   standing_2d      square; the unforced standing wave
//                    u = cos(lambda^(s/2) t) sin(pi x1) sin(pi x2),
//                    lambda = 2 pi^2
//   modal            user-specified per-mode data (config key "modes")
enum class DataSet { manufactured_1d, standing_2d, modal };

// Error measured on the final iterate:
//   hs_final         | U_K - u(T) | in the fractional H^s norm via the
//                    spectral expansion of the difference
//   l2_dt_staggered  | (U_K - U_{K-1})/dt - u_t(T - dt/2) | in L2
enum class ErrorMetric { hs_final, l2_dt_staggered };

struct CustomMode {
  int m = 1, n = 1;  // n ignored on the interval
  double g = 0.0, h = 0.0;
  ForcingShape shape = ForcingShape::none;
  double amp = 0.0;
};

struct ExperimentConfig {
  Domain domain = Domain::interval;
  double s = 0.5;
  Scheme scheme = Scheme::trapezoidal;
  double T = 1.5707963267948966;  // pi/2
  DtRule dt_rule = DtRule::half_power;
  double dt_value = 0.1;   // used by DtRule::fixed
  double dt_coeff = 0.5;   // used by DtRule::linear
  std::vector<int> ladder = {8, 16, 32, 64};
  double Y = 0.0;      // truncation height; 0 = rule of thumb from h_T
  int M = 0;           // y-elements; 0 = derived from Y and sigma
  double sigma = 0.5;  // geometric grading ratio
  double slope = 1.0;  // degree growth slope
  DataSet data = DataSet::manufactured_1d;
  std::vector<CustomMode> modes;  // for DataSet::modal
  ErrorMetric metric = ErrorMetric::hs_final;
  int spectral_modes = 0;  // reference modes per direction; 0 = 64/32
  int panels = 4096;       // quadrature panels for spectral expansions
  std::string out;         // output path ("" = stdout)
  unsigned long seed = 20260214;
  int threads = 1;
  double theta = 0.5;              // energy-margin safety factor
  std::vector<double> snapshots;   // times for single-solve output
  int n_single = 64;               // resolution of solve/energy runs
};

// Flat key=value configuration text ('#' comments, blank lines ignored).
// Unknown keys and malformed values raise ConfigError.
ExperimentConfig parse_config_file(const std::string& path);
// Apply one key=value entry (also used for command-line overrides, which
// win over the file by being applied afterwards).
void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value);
// Cross-field validation; raises ConfigError on inconsistency.
void validate_config(const ExperimentConfig& config);

struct ConvergenceRow {
  int n = 0;            // cells per direction
  double h_t = 0.0;     // mesh size
  double dt = 0.0;      // realized step
  int K = 0;            // number of steps
  double Y = 0.0;       // truncation height used
  int M = 0;            // y-elements used
  int dof_y = 0;        // y-direction space dimension
  double error = 0.0;
  double observed_rate = 0.0;  // NaN on the first row
  double wall_time_ms = 0.0;
  double energy_drift = 0.0;   // max_k |E_k - E_1| / max(|E_1|, eps)
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  // Least-squares slope of log(error) against log(h_t).
  double fitted_slope() const;
};

ConvergenceTable run_convergence(const ExperimentConfig& config);
std::string convergence_csv(const ConvergenceTable& table);

struct EnergyAudit {
  TimeGrid grid;
  std::vector<double> energy;  // E_k for k = 1..K
  double drift = 0.0;          // max_k |E_k - E_1| / max(|E_1|, eps)
  double min_energy = 0.0;
};

EnergyAudit run_energy_audit(const ExperimentConfig& config);
std::string energy_csv(const EnergyAudit& audit);

struct SingleRun {
  std::vector<double> times;       // snapshot times actually used
  std::vector<std::string> notes;  // e.g. clamped snapshot warnings
  int coord_cols = 1;              // 1 or 2 coordinate columns
  // one row per mesh node: coordinates, then (u_h, u_ref) per snapshot
  Eigen::MatrixXd table;
};

SingleRun run_single(const ExperimentConfig& config);
std::string single_csv(const SingleRun& run);

// Writes base_mass.txt, base_stiffness.txt, cylinder_mass.txt,
// cylinder_stiffness.txt (the latter two unscaled, as assembled) into
// the directory `dir`, in "row col value" coordinate text with a
// "rows cols nnz" first line, 0-based indices.
void dump_matrices(const ExperimentConfig& config, const std::string& dir);

// Helper shared with tests: write `text` to config-style output target
// (path, or stdout when empty).  Raises IoError on failure.
void write_output(const std::string& path, const std::string& text);

}  // namespace fracwave
