#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "celgc/rng.hpp"
#include "celgc/vecmath.hpp"

namespace celgc {

/// A synthetic objective with analytic evaluators and a declared smoothness
/// certificate: the Hessian spectral norm is claimed to be bounded by
/// l0 + l1 * |grad f(x)| everywhere (checked by certify_smoothness).
///
/// All shipped Hessians are diagonal, so spectral norms are closed-form.
struct ObjectiveSpec {
  std::string name;
  int dim = 0;
  double l0 = 0.0;
  double l1 = 0.0;
  double f_star = 0.0;
  /// Radius of the ball (around the origin) inside which the certificate is
  /// validated and initial points are placed.
  double test_ball_radius = 0.0;

  std::function<double(const ParamVector&)> value;
  std::function<ParamVector(const ParamVector&)> gradient;
  std::function<double(const ParamVector&)> hessian_spectral_norm;
};

/// f(x) = sum_i x_i^4, declared (12, 3)-smooth, f* = 0.
ObjectiveSpec make_quartic(int dim);

/// f(x) = 0.5 |x|^2, declared (1, 0)-smooth, f* = 0.
ObjectiveSpec make_quadratic(int dim);

/// 1-D f(x) = cosh(a x) / a^2, declared (1, a)-smooth, f* = 1/a^2.
/// The gradient grows like exp(a |x|), the canonical non-Lipschitz case.
ObjectiveSpec make_exp1d(double a);

/// Factory by config-file name: "quartic", "quadratic", "exp1d".
ObjectiveSpec make_objective(const std::string& name, int dim,
                             double exp_scale = 1.0);

struct SmoothnessCertificate {
  std::string objective;
  double declared_l0 = 0.0;
  double declared_l1 = 0.0;
  double ball_radius = 0.0;
  int samples = 0;
  /// max over sampled x with |grad| > 0 of (|hess| - l0) / |grad|.
  double max_ratio = 0.0;
  bool pass = false;
  std::string diagnostic;
};

/// Samples points uniformly in the ball of the given radius (deterministic
/// under seed) and checks |hess(x)| <= l0 + l1 |grad(x)| at every one.
SmoothnessCertificate certify_smoothness(const ObjectiveSpec& obj,
                                         double ball_radius, int samples,
                                         std::uint64_t seed);

/// |grad f(x') - grad f(x)| / |x' - x|. Requires x != x'.
double local_smoothness_estimate(const ObjectiveSpec& obj, const ParamVector& x,
                                 const ParamVector& x_next);

/// Uniform sample from the ball of given radius centered at the origin.
ParamVector sample_in_ball(std::size_t dim, double radius, CounterRng& rng);

}  // namespace celgc
