// Part of fracwave, released under the MIT license; see LICENSE at the
// repository root.
#include "fracwave/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>

#include "fracwave/errors.hpp"
#include "fracwave/special_functions.hpp"

namespace fracwave {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char delim) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, delim)) out.push_back(item);
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t idx = 0;
    const double v = std::stod(value, &idx);
    if (trim(value.substr(idx)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("config: key '" + key + "' expects a number, got '" +
                    value + "'");
}

long parse_long(const std::string& key, const std::string& value) {
  try {
    std::size_t idx = 0;
    const long v = std::stol(value, &idx);
    if (trim(value.substr(idx)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("config: key '" + key + "' expects an integer, got '" +
                    value + "'");
}

ForcingShape parse_shape(const std::string& key, const std::string& value) {
  if (value == "none") return ForcingShape::none;
  if (value == "sin") return ForcingShape::sine;
  if (value == "cos") return ForcingShape::cosine;
  throw ConfigError("config: key '" + key +
                    "' expects none|sin|cos, got '" + value + "'");
}

CustomMode parse_mode_entry(const std::string& entry) {
  // "m:g:h[:shape:amp]" on the interval, "m,n:g:h[:shape:amp]" on the
  // square (the n part is simply ignored for interval runs).
  const std::vector<std::string> parts = split(trim(entry), ':');
  if (parts.size() != 3 && parts.size() != 5) {
    throw ConfigError("config: mode entry '" + entry +
                      "' must have 3 or 5 ':'-separated fields");
  }
  CustomMode cm;
  const std::vector<std::string> idx = split(parts[0], ',');
  if (idx.empty() || idx.size() > 2) {
    throw ConfigError("config: bad mode index in '" + entry + "'");
  }
  cm.m = static_cast<int>(parse_long("modes", idx[0]));
  cm.n = idx.size() == 2 ? static_cast<int>(parse_long("modes", idx[1])) : 1;
  cm.g = parse_double("modes", parts[1]);
  cm.h = parse_double("modes", parts[2]);
  if (parts.size() == 5) {
    cm.shape = parse_shape("modes", trim(parts[3]));
    cm.amp = parse_double("modes", parts[4]);
  }
  return cm;
}

}  // namespace

void apply_config_entry(ExperimentConfig& config, const std::string& raw_key,
                        const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  if (key == "domain") {
    if (value == "interval") config.domain = Domain::interval;
    else if (value == "square") config.domain = Domain::square;
    else throw ConfigError("config: domain must be interval|square");
  } else if (key == "s") {
    config.s = parse_double(key, value);
  } else if (key == "scheme") {
    if (value == "leapfrog") config.scheme = Scheme::leapfrog;
    else if (value == "trapezoidal") config.scheme = Scheme::trapezoidal;
    else throw ConfigError("config: scheme must be leapfrog|trapezoidal");
  } else if (key == "T") {
    config.T = parse_double(key, value);
  } else if (key == "dt_rule") {
    if (value == "fixed") config.dt_rule = DtRule::fixed;
    else if (value == "half-power") config.dt_rule = DtRule::half_power;
    else if (value == "s-power") config.dt_rule = DtRule::s_power;
    else if (value == "linear") config.dt_rule = DtRule::linear;
    else
      throw ConfigError(
          "config: dt_rule must be fixed|half-power|s-power|linear");
  } else if (key == "dt") {
    config.dt_value = parse_double(key, value);
  } else if (key == "dt_coeff") {
    config.dt_coeff = parse_double(key, value);
  } else if (key == "ladder") {
    config.ladder.clear();
    for (const std::string& part : split(value, ',')) {
      config.ladder.push_back(static_cast<int>(parse_long(key, part)));
    }
  } else if (key == "Y") {
    config.Y = parse_double(key, value);
  } else if (key == "M") {
    config.M = static_cast<int>(parse_long(key, value));
  } else if (key == "sigma") {
    config.sigma = parse_double(key, value);
  } else if (key == "slope") {
    config.slope = parse_double(key, value);
  } else if (key == "data") {
    if (value == "manufactured-1d") config.data = DataSet::manufactured_1d;
    else if (value == "standing-2d") config.data = DataSet::standing_2d;
    else if (value == "modal") config.data = DataSet::modal;
    else
      throw ConfigError(
          "config: data must be manufactured-1d|standing-2d|modal");
  } else if (key == "modes") {
    config.modes.clear();
    for (const std::string& entry : split(value, ';')) {
      if (!trim(entry).empty()) config.modes.push_back(parse_mode_entry(entry));
    }
  } else if (key == "metric") {
    if (value == "hs-final") config.metric = ErrorMetric::hs_final;
    else if (value == "l2-dt-staggered")
      config.metric = ErrorMetric::l2_dt_staggered;
    else throw ConfigError("config: metric must be hs-final|l2-dt-staggered");
  } else if (key == "spectral_modes") {
    config.spectral_modes = static_cast<int>(parse_long(key, value));
  } else if (key == "panels") {
    config.panels = static_cast<int>(parse_long(key, value));
  } else if (key == "out") {
    config.out = value;
  } else if (key == "seed") {
    config.seed = static_cast<unsigned long>(parse_long(key, value));
  } else if (key == "threads") {
    config.threads = static_cast<int>(parse_long(key, value));
  } else if (key == "theta") {
    config.theta = parse_double(key, value);
  } else if (key == "snapshots") {
    config.snapshots.clear();
    for (const std::string& part : split(value, ',')) {
      config.snapshots.push_back(parse_double(key, part));
    }
  } else if (key == "n") {
    config.n_single = static_cast<int>(parse_long(key, value));
  } else {
    throw ConfigError("config: unknown key '" + key + "'");
  }
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open config file '" + path + "'");
  }
  ExperimentConfig config;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: line " + std::to_string(lineno) +
                        " is not of the form key=value");
    }
    try {
      apply_config_entry(config, line.substr(0, eq), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(e.what()) + " (line " +
                        std::to_string(lineno) + ")");
    }
  }
  return config;
}

void validate_config(const ExperimentConfig& c) {
  if (!(c.s > 0.0) || !(c.s < 1.0)) {
    throw ConfigError("config: s must lie in (0,1)");
  }
  if (!(c.T > 0.0)) throw ConfigError("config: T must be positive");
  if (!(c.sigma > 0.0) || !(c.sigma < 1.0)) {
    throw ConfigError("config: sigma must lie in (0,1)");
  }
  if (!(c.slope > 0.0)) throw ConfigError("config: slope must be positive");
  if (c.ladder.empty()) throw ConfigError("config: ladder must be nonempty");
  for (int n : c.ladder) {
    if (n < 2) throw ConfigError("config: ladder entries must be >= 2");
  }
  if (c.panels < 1) throw ConfigError("config: panels must be >= 1");
  if (c.threads < 1) throw ConfigError("config: threads must be >= 1");
  if (!(c.theta >= 0.0) || !(c.theta < 1.0)) {
    throw ConfigError("config: theta must lie in [0,1)");
  }
  if (c.n_single < 2) throw ConfigError("config: n must be >= 2");
  if (c.dt_rule == DtRule::fixed && !(c.dt_value > 0.0)) {
    throw ConfigError("config: dt must be positive for dt_rule=fixed");
  }
  if (c.dt_rule == DtRule::linear && !(c.dt_coeff > 0.0)) {
    throw ConfigError("config: dt_coeff must be positive for dt_rule=linear");
  }
  if (c.data == DataSet::manufactured_1d && c.domain != Domain::interval) {
    throw ConfigError("config: data=manufactured-1d requires domain=interval");
  }
  if (c.data == DataSet::standing_2d && c.domain != Domain::square) {
    throw ConfigError("config: data=standing-2d requires domain=square");
  }
  if (c.data == DataSet::modal && c.modes.empty()) {
    throw ConfigError("config: data=modal requires a nonempty modes list");
  }
  if (c.spectral_modes < 0 || c.M < 0) {
    throw ConfigError("config: spectral_modes and M cannot be negative");
  }
  if (c.Y < 0.0) throw ConfigError("config: Y cannot be negative");
}

namespace {

// Auto-sized spectral basis: the H^s error metric integrates the error
// field against eigenfunctions, and a P1 field on an n-cell mesh carries
// error content up to wavenumbers well above n.  Truncating the modal
// sum near n hides that content, so the basis must outrun the finest
// mesh of the run.
int effective_spectral_modes(const ExperimentConfig& c, int n_max) {
  if (c.spectral_modes > 0) return c.spectral_modes;
  if (c.domain == Domain::interval) return std::max(64, 4 * n_max);
  return std::max(32, 2 * n_max);
}

struct PreparedData {
  std::vector<ModalData> modal;
  ScalarField g_field, h_field;          // null when identically zero
  ScalarField f_sin_field, f_cos_field;  // spatial profiles of the forcing
};

PreparedData prepare_data(const ExperimentConfig& config,
                          const SpectralBasis& basis) {
  PreparedData pd;
  pd.modal.assign(basis.size(), ModalData{});

  if (config.data == DataSet::manufactured_1d) {
    // u = sin(t) sin(pi x): mode m=1 with h = 1/sqrt(2) and sine
    // forcing of amplitude (pi^(2s) - 1)/sqrt(2)
    const double amp = std::pow(kPi, 2.0 * config.s) - 1.0;
    pd.modal[0].h = 1.0 / std::sqrt(2.0);
    pd.modal[0].shape = ForcingShape::sine;
    pd.modal[0].amp = amp / std::sqrt(2.0);
    pd.h_field = [](double x1, double) { return std::sin(kPi * x1); };
    pd.f_sin_field = [amp](double x1, double) {
      return amp * std::sin(kPi * x1);
    };
    return pd;
  }

  if (config.data == DataSet::standing_2d) {
    // standing wave on the (2,2) eigenfunction, which in cartesian form
    // is sin(pi x1) sin(pi x2)
    int idx = -1;
    for (int k = 0; k < basis.size(); ++k) {
      if (basis.mode(k).m == 2 && basis.mode(k).n == 2) {
        idx = k;
        break;
      }
    }
    if (idx < 0) {
      throw ConfigError(
          "config: spectral_modes too small to contain mode (2,2)");
    }
    pd.modal[idx].g = 1.0;
    pd.g_field = [](double x1, double x2) {
      return std::sin(kPi * x1) * std::sin(kPi * x2);
    };
    return pd;
  }

  // custom modal data
  std::vector<std::pair<int, double>> g_terms, h_terms, fs_terms, fc_terms;
  for (const CustomMode& cm : config.modes) {
    int idx = -1;
    for (int k = 0; k < basis.size(); ++k) {
      const SpectralMode& md = basis.mode(k);
      if (md.m == cm.m &&
          (config.domain == Domain::interval || md.n == cm.n)) {
        idx = k;
        break;
      }
    }
    if (idx < 0) {
      throw ConfigError("config: mode (" + std::to_string(cm.m) + "," +
                        std::to_string(cm.n) +
                        ") is outside the retained spectral basis");
    }
    ModalData& md = pd.modal[idx];
    md.g += cm.g;
    md.h += cm.h;
    if (cm.shape != ForcingShape::none && cm.amp != 0.0) {
      if (md.shape != ForcingShape::none && md.shape != cm.shape) {
        throw ConfigError(
            "config: a mode carries both sine and cosine forcing; merge "
            "the entries");
      }
      md.shape = cm.shape;
      md.amp += cm.amp;
    }
    if (cm.g != 0.0) g_terms.emplace_back(idx, cm.g);
    if (cm.h != 0.0) h_terms.emplace_back(idx, cm.h);
    if (cm.shape == ForcingShape::sine && cm.amp != 0.0) {
      fs_terms.emplace_back(idx, cm.amp);
    }
    if (cm.shape == ForcingShape::cosine && cm.amp != 0.0) {
      fc_terms.emplace_back(idx, cm.amp);
    }
  }
  auto make_field = [&basis](std::vector<std::pair<int, double>> terms)
      -> ScalarField {
    if (terms.empty()) return nullptr;
    return [&basis, terms](double x1, double x2) {
      double acc = 0.0;
      for (const auto& [k, c] : terms) acc += c * basis.eval_mode(k, x1, x2);
      return acc;
    };
  };
  pd.g_field = make_field(std::move(g_terms));
  pd.h_field = make_field(std::move(h_terms));
  pd.f_sin_field = make_field(std::move(fs_terms));
  pd.f_cos_field = make_field(std::move(fc_terms));
  return pd;
}

double dt_target_for(const ExperimentConfig& config, double h_t) {
  switch (config.dt_rule) {
    case DtRule::fixed:
      return config.dt_value;
    case DtRule::half_power:
      return std::sqrt(0.5 * h_t);
    case DtRule::s_power:
      return std::pow(0.5 * h_t, std::max(0.5, config.s));
    case DtRule::linear:
      return config.dt_coeff * h_t;
  }
  throw ConfigError("config: unknown dt rule");
}

struct ResolutionResult {
  std::unique_ptr<OmegaMesh> mesh;
  OmegaMatrices mats;
  std::unique_ptr<DtnOperator> op;
  TimeGrid grid{};
  WaveState state;
  std::vector<double> energies;  // E_k, k = 1..K
  double energy_drift = 0.0;
  double min_energy = 0.0;
  double Y_eff = 0.0;
  int M_eff = 0;
  int dof_y = 0;
  double wall_ms = 0.0;
};

// Optional per-step hook: called as (step index of u_curr, state) after
// every accepted step, plus once for the initial state (index 1).
using StepHook = std::function<void(int, const WaveState&)>;

ResolutionResult solve_resolution(const ExperimentConfig& config,
                                  const PreparedData& pd, int n,
                                  const StepHook& hook = nullptr) {
  const auto t0 = std::chrono::steady_clock::now();
  ResolutionResult rr;
  rr.mesh = std::make_unique<OmegaMesh>(config.domain, n);
  rr.mats = assemble_omega(*rr.mesh);
  const double h_t = rr.mesh->mesh_size();

  // truncation height: a multiple of |log h_T| calibrated so the
  // exponential tail exp(-sqrt(lambda_1) Y) is negligible against the
  // discretization error
  const double lambda1 =
      config.domain == Domain::interval ? kPi * kPi : 0.5 * kPi * kPi;
  rr.Y_eff = config.Y > 0.0
                 ? config.Y
                 : std::max(1.0, 3.0 / std::sqrt(lambda1) *
                                     std::abs(std::log(h_t)));
  rr.M_eff = config.M > 0
                 ? config.M
                 : static_cast<int>(std::ceil(rr.Y_eff)) *
                       static_cast<int>(std::ceil(1.0 / (1.0 - config.sigma)));
  const GeometricMesh ymesh =
      build_geometric_mesh(rr.Y_eff, rr.M_eff, config.sigma);
  const DegreeVector degrees = build_degree_vector(rr.M_eff, config.slope);
  const FractionalOrder frac = make_fractional_order(config.s);
  const HpSpaceY hp = assemble_weighted_matrices(ymesh, degrees, frac.alpha);
  rr.dof_y = hp.dim;
  rr.op = std::make_unique<DtnOperator>(hp, rr.mats, frac);
  rr.op->set_threads(config.threads);

  const double dt_target = dt_target_for(config, h_t);
  if (!(dt_target > 0.0)) {
    throw ConfigError("config: nonpositive target time step");
  }
  const int K =
      std::max(2, static_cast<int>(std::ceil(config.T / dt_target - 1e-12)));
  rr.grid = make_time_grid(config.T, K);

  if (config.scheme == Scheme::leapfrog) {
    const double lam = rr.op->spectral_bound(1e-6, 1000, config.seed);
    const double classical = 0.25 * rr.grid.dt * rr.grid.dt * lam;
    if (classical >= 1.0) {
      throw NumericalError(
          "leapfrog step violates the stability bound: dt^2 lambda_max/4 = " +
          std::to_string(classical) + " >= 1 at n = " + std::to_string(n));
    }
    const CflReport cfl = check_cfl(*rr.op, rr.grid.dt, config.theta);
    if (!cfl.pass) {
      std::cerr << "note: energy-margin check below theta at n = " << n
                << " (margin = " << cfl.margin << ", theta = " << cfl.theta
                << "); classical bound satisfied (dt^2 lambda/4 = "
                << classical << ")\n";
    }
  }

  const int nint = rr.mesh->num_interior();
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(nint);
  const Eigen::VectorXd g_proj =
      pd.g_field ? l2_project(*rr.mesh, rr.mats, pd.g_field) : zero;
  const Eigen::VectorXd h_proj =
      pd.h_field ? l2_project(*rr.mesh, rr.mats, pd.h_field) : zero;
  const Eigen::VectorXd f_sin =
      pd.f_sin_field ? l2_project(*rr.mesh, rr.mats, pd.f_sin_field) : zero;
  const Eigen::VectorXd f_cos =
      pd.f_cos_field ? l2_project(*rr.mesh, rr.mats, pd.f_cos_field) : zero;
  const bool has_f = pd.f_sin_field || pd.f_cos_field;

  // f(0) = 0*f_sin + 1*f_cos
  rr.state = make_initial_state(*rr.op, rr.grid, g_proj, h_proj, f_cos);
  if (hook) hook(1, rr.state);

  auto forcing_at = [&](double t) -> Eigen::VectorXd {
    return std::sin(t) * f_sin + std::cos(t) * f_cos;
  };

  rr.energies.clear();
  rr.energies.reserve(K);
  const double dt = rr.grid.dt;
  if (config.scheme == Scheme::leapfrog) {
    LeapfrogStepper stepper(*rr.op, rr.grid);
    for (int k = 1; k < K; ++k) {
      const Eigen::VectorXd fk =
          has_f ? forcing_at(k * dt) : zero;
      stepper.step(rr.state, fk, rr.grid);
      rr.energies.push_back(stepper.last_input_energy());
      if (hook) hook(rr.state.step, rr.state);
    }
    rr.energies.push_back(
        leapfrog_energy(*rr.op, dt, rr.state.u_prev, rr.state.u_curr));
  } else {
    TrapezoidalStepper stepper(*rr.op, rr.grid);
    for (int k = 1; k < K; ++k) {
      Eigen::VectorXd favg = zero;
      if (has_f) {
        const double ws =
            0.25 * (std::sin((k + 1) * dt) + 2.0 * std::sin(k * dt) +
                    std::sin((k - 1) * dt));
        const double wc =
            0.25 * (std::cos((k + 1) * dt) + 2.0 * std::cos(k * dt) +
                    std::cos((k - 1) * dt));
        favg = ws * f_sin + wc * f_cos;
      }
      stepper.step(rr.state, favg, rr.grid);
      rr.energies.push_back(stepper.last_input_energy());
      if (hook) hook(rr.state.step, rr.state);
    }
    rr.energies.push_back(
        trapezoidal_energy(*rr.op, dt, rr.state.u_prev, rr.state.u_curr));
  }

  const double e1 = rr.energies.front();
  double drift = 0.0, emin = rr.energies.front();
  for (double e : rr.energies) {
    drift = std::max(drift, std::abs(e - e1));
    emin = std::min(emin, e);
  }
  rr.energy_drift = drift / std::max(std::abs(e1), 1e-300);
  rr.min_energy = emin;

  rr.wall_ms = std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - t0)
                   .count();
  return rr;
}

double measure_error(const ExperimentConfig& config, const PreparedData& pd,
                     const SpectralBasis& basis, const ResolutionResult& rr) {
  const ExactSolution exact(basis, pd.modal, config.s);
  const double T = rr.grid.T;
  if (config.metric == ErrorMetric::hs_final) {
    const OmegaMesh& mesh = *rr.mesh;
    const Eigen::VectorXd& U = rr.state.u_curr;
    const ScalarField err = [&](double x1, double x2) {
      return p1_evaluate(mesh, U, x1, x2) - exact.value(T, x1, x2);
    };
    const SpectralCoefficients sc = decompose(basis, err, config.panels);
    return hs_norm(basis, sc.c, config.s);
  }
  // staggered velocity misfit in L2
  const double dt = rr.grid.dt;
  const Eigen::VectorXd du =
      backward_difference(rr.state.u_curr, rr.state.u_prev, dt);
  const double t_half = T - 0.5 * dt;
  const ScalarField vel = [&](double x1, double x2) {
    return exact.velocity(t_half, x1, x2);
  };
  return l2_error_elementwise(*rr.mesh, du, vel);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

}  // namespace

double ConvergenceTable::fitted_slope() const {
  // least squares of log(error) against log(h_t)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (const ConvergenceRow& row : rows) {
    if (!(row.error > 0.0) || !(row.h_t > 0.0)) continue;
    const double x = std::log(row.h_t);
    const double y = std::log(row.error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) return std::numeric_limits<double>::quiet_NaN();
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

ConvergenceTable run_convergence(const ExperimentConfig& config) {
  validate_config(config);
  int n_max = config.ladder.front();
  for (int n : config.ladder) n_max = std::max(n_max, n);
  const SpectralBasis basis(config.domain,
                            effective_spectral_modes(config, n_max));
  const PreparedData pd = prepare_data(config, basis);

  ConvergenceTable table;
  for (int n : config.ladder) {
    const ResolutionResult rr = solve_resolution(config, pd, n);
    ConvergenceRow row;
    row.n = n;
    row.h_t = rr.mesh->mesh_size();
    row.dt = rr.grid.dt;
    row.K = rr.grid.K;
    row.Y = rr.Y_eff;
    row.M = rr.M_eff;
    row.dof_y = rr.dof_y;
    row.error = measure_error(config, pd, basis, rr);
    row.wall_time_ms = rr.wall_ms;
    row.energy_drift = rr.energy_drift;
    if (!table.rows.empty() && table.rows.back().error > 0.0 &&
        row.error > 0.0) {
      const ConvergenceRow& prev = table.rows.back();
      row.observed_rate = std::log(prev.error / row.error) /
                          std::log(prev.h_t / row.h_t);
    } else {
      row.observed_rate = std::numeric_limits<double>::quiet_NaN();
    }
    table.rows.push_back(row);
  }
  return table;
}

std::string convergence_csv(const ConvergenceTable& table) {
  std::string out =
      "n,h_T,dt,K,Y,M,dof_y,error,observed_rate,wall_time_ms,energy_drift\n";
  for (const ConvergenceRow& r : table.rows) {
    out += std::to_string(r.n) + ",";
    out += format_double(r.h_t) + ",";
    out += format_double(r.dt) + ",";
    out += std::to_string(r.K) + ",";
    out += format_double(r.Y) + ",";
    out += std::to_string(r.M) + ",";
    out += std::to_string(r.dof_y) + ",";
    out += format_double(r.error) + ",";
    out += std::isnan(r.observed_rate) ? std::string()
                                       : format_double(r.observed_rate);
    out += ",";
    out += format_double(r.wall_time_ms) + ",";
    out += format_double(r.energy_drift) + "\n";
  }
  return out;
}

EnergyAudit run_energy_audit(const ExperimentConfig& config) {
  validate_config(config);
  const SpectralBasis basis(
      config.domain, effective_spectral_modes(config, config.n_single));
  const PreparedData pd = prepare_data(config, basis);
  const ResolutionResult rr = solve_resolution(config, pd, config.n_single);
  EnergyAudit audit;
  audit.grid = rr.grid;
  audit.energy = rr.energies;
  audit.drift = rr.energy_drift;
  audit.min_energy = rr.min_energy;
  return audit;
}

std::string energy_csv(const EnergyAudit& audit) {
  std::string out = "k,t,energy\n";
  for (std::size_t i = 0; i < audit.energy.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    out += std::to_string(k) + ",";
    out += format_double(k * audit.grid.dt) + ",";
    out += format_double(audit.energy[i]) + "\n";
  }
  return out;
}

SingleRun run_single(const ExperimentConfig& config) {
  validate_config(config);
  const SpectralBasis basis(
      config.domain, effective_spectral_modes(config, config.n_single));
  const PreparedData pd = prepare_data(config, basis);

  SingleRun run;
  std::vector<double> wanted = config.snapshots;
  if (wanted.empty()) wanted.push_back(config.T);

  // First pass: need the grid to map times to steps, so resolve the
  // grid the same way solve_resolution will (same dt rule).
  OmegaMesh probe(config.domain, config.n_single);
  const double dt_target = dt_target_for(config, probe.mesh_size());
  const int K =
      std::max(2, static_cast<int>(std::ceil(config.T / dt_target - 1e-12)));
  const double dt = config.T / K;

  std::vector<int> snap_steps;
  for (double t : wanted) {
    double tc = t;
    if (tc < 0.0 || tc > config.T) {
      tc = std::clamp(tc, 0.0, config.T);
      run.notes.push_back("snapshot time " + std::to_string(t) +
                          " clamped to " + std::to_string(tc));
    }
    snap_steps.push_back(
        std::clamp(static_cast<int>(std::llround(tc / dt)), 0, K));
  }

  std::vector<Eigen::VectorXd> snaps(snap_steps.size());
  std::vector<bool> have(snap_steps.size(), false);
  const StepHook hook = [&](int step, const WaveState& st) {
    for (std::size_t i = 0; i < snap_steps.size(); ++i) {
      if (snap_steps[i] == step) {
        snaps[i] = st.u_curr;
        have[i] = true;
      } else if (snap_steps[i] == step - 1 && !have[i]) {
        snaps[i] = st.u_prev;
        have[i] = true;
      }
    }
  };
  const ResolutionResult rr = solve_resolution(config, pd, config.n_single, hook);
  if (rr.grid.K != K || rr.grid.dt != dt) {
    throw NumericalError("run_single: grid resolution mismatch");
  }
  for (std::size_t i = 0; i < snap_steps.size(); ++i) {
    if (!have[i]) {  // final state reached without the hook matching
      snaps[i] = snap_steps[i] == rr.state.step ? rr.state.u_curr
                                                : rr.state.u_prev;
    }
    run.times.push_back(snap_steps[i] * dt);
  }

  const ExactSolution exact(basis, pd.modal, config.s);
  const OmegaMesh& mesh = *rr.mesh;
  const int rows = mesh.num_nodes();
  run.coord_cols = config.domain == Domain::interval ? 1 : 2;
  run.table.resize(rows, run.coord_cols + 2 * static_cast<int>(snaps.size()));
  for (int node = 0; node < rows; ++node) {
    double x1, x2;
    mesh.node_coord(node, x1, x2);
    run.table(node, 0) = x1;
    if (run.coord_cols == 2) run.table(node, 1) = x2;
    for (std::size_t i = 0; i < snaps.size(); ++i) {
      const int idx = mesh.interior_index_of_node(node);
      const double uh = idx >= 0 ? snaps[i][idx] : 0.0;
      run.table(node, run.coord_cols + 2 * static_cast<int>(i)) = uh;
      run.table(node, run.coord_cols + 2 * static_cast<int>(i) + 1) =
          exact.value(run.times[i], x1, x2);
    }
  }
  return run;
}

std::string single_csv(const SingleRun& run) {
  std::string out;
  for (const std::string& note : run.notes) {
    out += "# " + note + "\n";
  }
  out += run.coord_cols == 1 ? "x" : "x1,x2";
  char buf[64];
  for (double t : run.times) {
    std::snprintf(buf, sizeof(buf), ",u_h@%.9g,u_ref@%.9g", t, t);
    out += buf;
  }
  out += "\n";
  for (int r = 0; r < run.table.rows(); ++r) {
    for (int c = 0; c < run.table.cols(); ++c) {
      if (c) out += ",";
      out += format_double(run.table(r, c));
    }
    out += "\n";
  }
  return out;
}

namespace {

void write_coordinate_file(const std::filesystem::path& path, int rows,
                           int cols,
                           const std::function<void(std::ostream&)>& body,
                           int nnz) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f << rows << " " << cols << " " << nnz << "\n";
  body(f);
  if (!f) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

void dump_matrices(const ExperimentConfig& config, const std::string& dir) {
  validate_config(config);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "'");

  const OmegaMesh mesh(config.domain, config.n_single);
  const OmegaMatrices mats = assemble_omega(mesh);

  const double lambda1 =
      config.domain == Domain::interval ? kPi * kPi : 0.5 * kPi * kPi;
  const double Y_eff =
      config.Y > 0.0 ? config.Y
                     : std::max(1.0, 3.0 / std::sqrt(lambda1) *
                                         std::abs(std::log(mesh.mesh_size())));
  const int M_eff =
      config.M > 0 ? config.M
                   : static_cast<int>(std::ceil(Y_eff)) *
                         static_cast<int>(std::ceil(1.0 / (1.0 - config.sigma)));
  const FractionalOrder frac = make_fractional_order(config.s);
  const HpSpaceY hp = assemble_weighted_matrices(
      build_geometric_mesh(Y_eff, M_eff, config.sigma),
      build_degree_vector(M_eff, config.slope), frac.alpha);

  auto dump_sparse = [&](const std::string& name,
                         const Eigen::SparseMatrix<double>& m) {
    write_coordinate_file(
        std::filesystem::path(dir) / name, static_cast<int>(m.rows()),
        static_cast<int>(m.cols()),
        [&](std::ostream& f) {
          for (int k = 0; k < m.outerSize(); ++k) {
            for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it;
                 ++it) {
              f << it.row() << " " << it.col() << " "
                << format_double(it.value()) << "\n";
            }
          }
        },
        static_cast<int>(m.nonZeros()));
  };
  auto dump_dense = [&](const std::string& name, const Eigen::MatrixXd& m) {
    int nnz = 0;
    for (int i = 0; i < m.rows(); ++i) {
      for (int j = 0; j < m.cols(); ++j) {
        if (m(i, j) != 0.0) ++nnz;
      }
    }
    write_coordinate_file(
        std::filesystem::path(dir) / name, static_cast<int>(m.rows()),
        static_cast<int>(m.cols()),
        [&](std::ostream& f) {
          for (int i = 0; i < m.rows(); ++i) {
            for (int j = 0; j < m.cols(); ++j) {
              if (m(i, j) != 0.0) {
                f << i << " " << j << " " << format_double(m(i, j)) << "\n";
              }
            }
          }
        },
        nnz);
  };

  dump_sparse("base_mass.txt", mats.mass);
  dump_sparse("base_stiffness.txt", mats.stiffness);
  dump_dense("cylinder_mass.txt", hp.mass);
  dump_dense("cylinder_stiffness.txt", hp.stiffness);
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(path);
  if (!f) throw IoError("cannot open output file '" + path + "'");
  f << text;
  if (!f) throw IoError("write failed for output file '" + path + "'");
}

}  // namespace fracwave
