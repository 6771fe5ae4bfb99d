#include "celgc/objectives.hpp"

#include <cmath>
#include <sstream>

namespace celgc {

namespace {

void require_dim(const char* name, int dim, const ParamVector& x) {
  if (static_cast<int>(x.size()) != dim) {
    throw DimensionMismatchError(std::string("objective '") + name +
                                 "' expects dim " + std::to_string(dim) +
                                 ", got " + std::to_string(x.size()));
  }
}

}  // namespace

ObjectiveSpec make_quartic(int dim) {
  if (dim < 1) throw ConfigError("quartic: dim must be >= 1");
  ObjectiveSpec obj;
  obj.name = "quartic";
  obj.dim = dim;
  obj.l0 = 12.0;
  obj.l1 = 3.0;
  obj.f_star = 0.0;
  obj.test_ball_radius = 5.0;
  obj.value = [dim](const ParamVector& x) {
    require_dim("quartic", dim, x);
    double f = 0.0;
    for (double xi : x) f += xi * xi * xi * xi;
    return f;
  };
  obj.gradient = [dim](const ParamVector& x) {
    require_dim("quartic", dim, x);
    ParamVector g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = 4.0 * x[i] * x[i] * x[i];
    return g;
  };
  // Hessian is diag(12 x_i^2).
  obj.hessian_spectral_norm = [dim](const ParamVector& x) {
    require_dim("quartic", dim, x);
    double m = 0.0;
    for (double xi : x) m = std::max(m, 12.0 * xi * xi);
    return m;
  };
  return obj;
}

ObjectiveSpec make_quadratic(int dim) {
  if (dim < 1) throw ConfigError("quadratic: dim must be >= 1");
  ObjectiveSpec obj;
  obj.name = "quadratic";
  obj.dim = dim;
  obj.l0 = 1.0;
  obj.l1 = 0.0;
  obj.f_star = 0.0;
  obj.test_ball_radius = 5.0;
  obj.value = [dim](const ParamVector& x) {
    require_dim("quadratic", dim, x);
    double f = 0.0;
    for (double xi : x) f += xi * xi;
    return 0.5 * f;
  };
  obj.gradient = [dim](const ParamVector& x) {
    require_dim("quadratic", dim, x);
    return x;
  };
  obj.hessian_spectral_norm = [dim](const ParamVector& x) {
    require_dim("quadratic", dim, x);
    return 1.0;
  };
  return obj;
}

ObjectiveSpec make_exp1d(double a) {
  if (!(a > 0.0)) throw ConfigError("exp1d: scale a must be > 0");
  ObjectiveSpec obj;
  obj.name = "exp1d";
  obj.dim = 1;
  obj.l0 = 1.0;
  obj.l1 = a;
  obj.f_star = 1.0 / (a * a);
  obj.test_ball_radius = 3.0;
  obj.value = [a](const ParamVector& x) {
    require_dim("exp1d", 1, x);
    return std::cosh(a * x[0]) / (a * a);
  };
  obj.gradient = [a](const ParamVector& x) {
    require_dim("exp1d", 1, x);
    return ParamVector{std::sinh(a * x[0]) / a};
  };
  // f'' = cosh(a x) <= 1 + a |f'| since cosh t - |sinh t| = exp(-|t|) <= 1.
  obj.hessian_spectral_norm = [a](const ParamVector& x) {
    require_dim("exp1d", 1, x);
    return std::cosh(a * x[0]);
  };
  return obj;
}

ObjectiveSpec make_objective(const std::string& name, int dim,
                             double exp_scale) {
  if (name == "quartic") return make_quartic(dim);
  if (name == "quadratic") return make_quadratic(dim);
  if (name == "exp1d") {
    if (dim != 1) throw ConfigError("exp1d is one-dimensional (dim must be 1)");
    return make_exp1d(exp_scale);
  }
  throw ConfigError("unknown objective '" + name +
                    "' (expected quartic, quadratic, or exp1d)");
}

ParamVector sample_in_ball(std::size_t dim, double radius, CounterRng& rng) {
  ParamVector dir = rng.next_gaussian_vector(dim);
  double norm = 0.0;
  for (double x : dir) norm += x * x;
  norm = std::sqrt(norm);
  if (norm == 0.0) return ParamVector(dim, 0.0);
  const double r =
      radius * std::pow(rng.next_unit(), 1.0 / static_cast<double>(dim));
  ParamVector out(dim);
  for (std::size_t i = 0; i < dim; ++i) out[i] = dir[i] * (r / norm);
  return out;
}

SmoothnessCertificate certify_smoothness(const ObjectiveSpec& obj,
                                         double ball_radius, int samples,
                                         std::uint64_t seed) {
  if (samples < 1) throw ConfigError("certify_smoothness: samples must be >= 1");
  if (!(ball_radius > 0.0)) {
    throw ConfigError("certify_smoothness: ball_radius must be > 0");
  }
  SmoothnessCertificate cert;
  cert.objective = obj.name;
  cert.declared_l0 = obj.l0;
  cert.declared_l1 = obj.l1;
  cert.ball_radius = ball_radius;
  cert.samples = samples;
  cert.pass = true;

  for (int k = 0; k < samples; ++k) {
    CounterRng rng(seed, 0, static_cast<std::uint64_t>(k));
    const ParamVector x = sample_in_ball(obj.dim, ball_radius, rng);
    const double hess = obj.hessian_spectral_norm(x);
    const ParamVector g = obj.gradient(x);
    if (!std::isfinite(hess) || !is_finite(g)) {
      cert.pass = false;
      std::ostringstream msg;
      msg << "non-finite evaluator output at sample " << k;
      cert.diagnostic = msg.str();
      return cert;
    }
    const double grad_norm = euclidean_norm(g);
    const double bound = obj.l0 + obj.l1 * grad_norm;
    if (hess > bound * (1.0 + 1e-12)) {
      cert.pass = false;
      std::ostringstream msg;
      msg << "violation at sample " << k << ": hessian norm " << hess
          << " > " << obj.l0 << " + " << obj.l1 << " * " << grad_norm;
      cert.diagnostic = msg.str();
    }
    if (grad_norm > 0.0) {
      cert.max_ratio = std::max(cert.max_ratio, (hess - obj.l0) / grad_norm);
    }
  }
  return cert;
}

double local_smoothness_estimate(const ObjectiveSpec& obj, const ParamVector& x,
                                 const ParamVector& x_next) {
  const ParamVector diff = sub(x_next, x);
  const double dist = euclidean_norm(diff);
  if (dist == 0.0) {
    throw InvalidVectorError("local_smoothness_estimate: x == x'");
  }
  const ParamVector gdiff = sub(obj.gradient(x_next), obj.gradient(x));
  return euclidean_norm(gdiff) / dist;
}

}  // namespace celgc
