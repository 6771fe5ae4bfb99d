#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "celgc/algorithms.hpp"
#include "celgc/noise.hpp"
#include "celgc/objectives.hpp"

namespace celgc {

/// How (eta, gamma) are obtained:
///  - kManual: taken verbatim from the config.
///  - kTheorem: the guarantee-exact plan values (worst case; usually
///    desk-infeasible iteration counts).
///  - kDesk: plan values scaled up by desk_scale with gamma/eta = 5 sigma
///    preserved; the 2*gamma*I <= 1/(2 L1) consensus precondition is
///    re-verified after scaling.
enum class HyperParamMode { kManual, kDesk, kTheorem };

/// Initial-point specification: an explicit vector, or a point at the given
/// radius along one axis.
struct X0Spec {
  bool explicit_vector = false;
  ParamVector values;
  double radius = 0.0;
  int axis = 1;  // 1-based

  ParamVector build(int dim) const;
};

/// Parsed experiment description (one key = value per line; see
/// parse_config).
struct ExperimentConfig {
  std::string objective_name;
  int dim = 0;
  double exp_scale = 1.0;

  std::string noise_name;
  double sigma = 0.0;
  double inner_std = 0.0;

  std::string algorithm;
  HyperParamMode mode = HyperParamMode::kManual;
  double eta = 0.0;
  double gamma = 0.0;
  double desk_scale = 100.0;
  double c_min = 1.0;
  /// Epsilon fed to the plan in desk/theorem mode; 0 means epsilon_target.
  double plan_epsilon = 0.0;

  long sync_interval = 1;
  long total_iters = 0;
  int workers = 1;
  int participation = 0;  // 0 -> workers

  X0Spec x0;
  std::vector<std::uint64_t> seeds;
  long record_every = 10;
  double epsilon_target = 0.0;
  std::string output;

  ObjectiveSpec build_objective() const;
  NoiseModel build_noise() const;
  ParamVector build_x0() const;
  /// Resolves (eta, gamma) per mode; throws ConfigError when the desk/theorem
  /// derivation is impossible or the consensus precondition fails.
  HyperParams resolve_hyperparams() const;
};

/// Parses the key = value format. '#' starts a comment; blank lines are
/// ignored; unknown or duplicate keys are errors with line diagnostics.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

}  // namespace celgc
