#pragma once

// Experiment configuration files: one `key = value` per line, `#` starts a
// comment. Unknown and repeated keys are errors.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "beam/integrator.hpp"
#include "beam/model.hpp"

namespace beam {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  // Model.
  std::string instance;
  double alpha = 0.0;
  double theta = 1.0;
  double theta_prime = 1.0;
  int m = 0;
  double L = 0.0;
  std::string forcing = "zero";
  std::optional<double> M_a, M_b, N_0, N_1, f_1, f_3;
  std::optional<double> sigma1, p, l0, l1, l2;

  // Time stepping.
  double T = 0.0;
  std::optional<double> dt;  // empty: auto
  int stride = 1;
  std::optional<Scheme> scheme;  // empty: auto
  std::string initial = "mode:1:1";

  // Ensembles.
  std::uint64_t seed = 1;
  int n_init = 16;
  double init_radius = 2.0;
  int n_pairs = 5;

  // Subcommand parameters.
  std::vector<double> alphas = {0.1, 0.01, 0.001, 0.0001};
  std::vector<double> perturbations = {1e-4, 1e-5};
  double lipschitz_tol = 0.05;
  std::string guess = "zero";
  double newton_tol = 1e-10;
  int newton_max_iter = 20;
  double tau_max = 100.0;
  double u_max = 10.0;
  int samples = 1001;
  double weak_s = 1.0;
  std::optional<double> holder_min;  // empty: 0.9 s / 2
  double t_transient = 60.0;
  double t_sample = 10.0;
  int sample_stride = 50;
  int box_dims = 3;
  std::vector<double> box_eps = {0.25,     0.125,     0.0625,    0.03125,
                                 0.015625, 0.0078125, 0.00390625, 0.001953125};
  double usc_threshold = 1e-3;
  double noise_floor = 1e-8;
  double rho_min = 0.85;
  double rho_max = 1.15;
  double terminal_tol = 1e-6;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Throws ConfigError with a line number for syntax errors, unknown or
/// repeated keys and malformed values, and without one for missing required
/// keys (instance, alpha, m, L, T) and range violations.
ExperimentConfig ParseConfig(std::string_view text);

/// Canonical text: every key in a fixed order, floats with 17 significant
/// digits. ParseConfig(EmitConfig(c)) == c.
std::string EmitConfig(const ExperimentConfig& config);

/// Model for the config's instance with overrides applied.
ModelConfig BuildModel(const ExperimentConfig& config);

/// Smooth pseudo-random state: z_j uniform on [-1, 1] from splitmix64 (y
/// entries first, then v), y_j = z_j / lambda_j, v_j = z'_j / lambda_j^{1/2},
/// scaled to phase norm `radius`.
State RandomState(const ModelConfig& model, std::uint64_t seed, double radius);

/// Initial-state specs: "zero", "mode:k:amp" (zero velocity),
/// "random:seed:radius", "resume:<trajectory csv>" (its last row).
State ResolveState(std::string_view spec, const ModelConfig& model);

/// Forcing specs: "zero", "mode:k:amp", or m comma-separated coefficients.
ModalVector ResolveForcing(std::string_view spec, int modes);

struct TimeStep {
  double dt = 0.0;
  /// rk4 stability bound at the initial state.
  double bound = 0.0;
  Scheme scheme = Scheme::kRk4;
};

/// dt, or half the bound when dt is auto; scheme, or DefaultScheme(m).
TimeStep ResolveTimeStep(const ExperimentConfig& config,
                         const ModelConfig& model, const State& initial);

}  // namespace beam
