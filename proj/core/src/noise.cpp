#include "celgc/noise.hpp"

#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

namespace celgc {

namespace {

constexpr double kMinAcceptance = 1e-6;
// With acceptance >= 1e-6 the chance of exhausting this many attempts is
// below (1 - 1e-6)^2^24 ~ 5e-8; hitting the cap means a validation bug.
constexpr int kMaxRejectionAttempts = 1 << 24;

}  // namespace

NoiseModel NoiseModel::zero() {
  NoiseModel m;
  m.kind = NoiseKind::kZero;
  return m;
}

NoiseModel NoiseModel::truncated_gaussian(double sigma, double inner_std) {
  if (!(sigma > 0.0)) {
    throw ConfigError("truncated_gaussian: sigma must be > 0");
  }
  if (inner_std == 0.0) inner_std = sigma / 3.0;
  if (!(inner_std > 0.0)) {
    throw ConfigError("truncated_gaussian: inner_std must be > 0");
  }
  NoiseModel m;
  m.kind = NoiseKind::kTruncatedGaussianBall;
  m.sigma = sigma;
  m.inner_std = inner_std;
  return m;
}

NoiseModel NoiseModel::from_name(const std::string& name, double sigma,
                                 double inner_std) {
  if (name == "zero") return zero();
  if (name == "truncated-gaussian-ball") {
    return truncated_gaussian(sigma, inner_std);
  }
  throw ConfigError("unknown noise model '" + name +
                    "' (expected zero or truncated-gaussian-ball)");
}

double acceptance_probability(const NoiseModel& model, std::size_t dim) {
  if (model.kind == NoiseKind::kZero) return 1.0;
  // |zeta|^2 / inner_std^2 is chi-square with dim degrees of freedom.
  const double r = model.sigma / model.inner_std;
  return boost::math::gamma_p(static_cast<double>(dim) / 2.0, r * r / 2.0);
}

void validate_noise(const NoiseModel& model, std::size_t dim) {
  if (dim < 1) throw ConfigError("noise: dim must be >= 1");
  if (model.kind == NoiseKind::kZero) return;
  // Memoize the last accepted (sigma, inner_std, dim): sample_noise runs this
  // per draw and the chi-square evaluation dominates otherwise.
  struct Last {
    double sigma, inner_std;
    std::size_t dim;
  };
  thread_local Last last{-1.0, -1.0, 0};
  if (model.sigma == last.sigma && model.inner_std == last.inner_std &&
      dim == last.dim) {
    return;
  }
  const double p = acceptance_probability(model, dim);
  if (p < kMinAcceptance) {
    throw ConfigError(
        "truncated_gaussian: acceptance probability " + std::to_string(p) +
        " at dim " + std::to_string(dim) +
        " is below 1e-6; inner_std is too large relative to sigma");
  }
  last = {model.sigma, model.inner_std, dim};
}

ParamVector sample_noise(const NoiseModel& model, std::size_t dim,
                         const RngStream& stream) {
  if (dim < 1) throw ConfigError("sample_noise: dim must be >= 1");
  if (model.kind == NoiseKind::kZero) return ParamVector(dim, 0.0);

  validate_noise(model, dim);
  CounterRng rng(stream);
  const double bound_sq = model.sigma * model.sigma;
  for (int attempt = 0; attempt < kMaxRejectionAttempts; ++attempt) {
    ParamVector z(dim);
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      z[i] = model.inner_std * rng.next_gaussian();
      norm_sq += z[i] * z[i];
    }
    if (norm_sq <= bound_sq) return z;
  }
  throw ConfigError("sample_noise: rejection sampler exhausted its attempts");
}

ParamVector stochastic_gradient(const ObjectiveSpec& obj,
                                const NoiseModel& model, const ParamVector& x,
                                const RngStream& stream) {
  ParamVector g = obj.gradient(x);
  if (model.kind == NoiseKind::kZero) return g;
  const ParamVector z = sample_noise(model, x.size(), stream);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] += z[i];
  return g;
}

}  // namespace celgc
