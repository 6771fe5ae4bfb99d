#pragma once

#include <string>

#include "celgc/objectives.hpp"
#include "celgc/rng.hpp"
#include "celgc/vecmath.hpp"

namespace celgc {

enum class NoiseKind {
  kZero,
  kTruncatedGaussianBall,
};

/// Stochastic-gradient perturbation generator. Every sample has norm at most
/// sigma; the truncated-Gaussian kind is isotropic with a density that
/// decreases monotonically in the distance from the origin (symmetric and
/// unimodal about its zero mean).
struct NoiseModel {
  NoiseKind kind = NoiseKind::kZero;
  /// Almost-sure bound on the deviation norm.
  double sigma = 0.0;
  /// Per-coordinate std of the Gaussian before ball truncation.
  double inner_std = 0.0;

  static NoiseModel zero();
  /// inner_std defaults to sigma / 3, which keeps rejection cheap while the
  /// density stays visibly non-uniform over the ball.
  static NoiseModel truncated_gaussian(double sigma, double inner_std = 0.0);

  static NoiseModel from_name(const std::string& name, double sigma,
                              double inner_std = 0.0);
};

/// Probability that an isotropic Gaussian draw lands inside the truncation
/// ball, i.e. the acceptance rate of the rejection sampler.
double acceptance_probability(const NoiseModel& model, std::size_t dim);

/// Throws ConfigError if the model cannot produce samples at this dimension
/// (acceptance probability below 1e-6).
void validate_noise(const NoiseModel& model, std::size_t dim);

/// One noise draw. Pure function of (model, dim, stream).
ParamVector sample_noise(const NoiseModel& model, std::size_t dim,
                         const RngStream& stream);

/// obj.gradient(x) + sample_noise(...): unbiased with a.s. deviation <= sigma.
ParamVector stochastic_gradient(const ObjectiveSpec& obj,
                                const NoiseModel& model, const ParamVector& x,
                                const RngStream& stream);

}  // namespace celgc
