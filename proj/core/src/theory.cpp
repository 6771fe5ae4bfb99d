#include "celgc/theory.hpp"

#include <cmath>
#include <limits>

namespace celgc {

ABConstants ab_constants(double c) {
  if (!(c > 0.0)) throw ConfigError("ab_constants: c must be > 0");
  ABConstants out;
  out.c = c;
  const double ratio = std::expm1(c) / c;  // (e^c - 1)/c, stable for small c
  out.a = 1.0 + std::exp(c) - ratio;
  out.b = ratio;
  return out;
}

TheoremOnePlan theorem1_plan(double epsilon, int workers, double sigma,
                             double l0, double l1, double delta, double c_min) {
  if (!(epsilon > 0.0)) throw ConfigError("plan: epsilon must be > 0");
  if (workers < 1) throw ConfigError("plan: workers must be >= 1");
  if (!(sigma > 0.0)) throw ConfigError("plan: sigma must be > 0");
  if (!(l0 > 0.0)) throw ConfigError("plan: L0 must be > 0");
  if (!(l1 >= 0.0)) throw ConfigError("plan: L1 must be >= 0");
  if (!(delta > 0.0)) throw ConfigError("plan: delta must be > 0");
  if (!(c_min > 0.0) || !(c_min <= 1.0)) {
    throw ConfigError("plan: c_min must lie in (0, 1]");
  }

  TheoremOnePlan plan;
  plan.epsilon = epsilon;
  plan.workers = workers;
  plan.sigma = sigma;
  plan.l0 = l0;
  plan.l1 = l1;
  plan.delta = delta;
  plan.c_min = c_min;

  const ABConstants ab = ab_constants(0.5);
  plan.a_const = ab.a;
  plan.b_const = ab.b;

  const double n = static_cast<double>(workers);
  const double inf = std::numeric_limits<double>::infinity();

  // Preconditions. The L1-dependent bounds are vacuous for L-smooth
  // objectives (L1 = 0).
  const double eps_cap = l1 > 0.0 ? ab.a * l0 / (ab.b * l1) : inf;
  plan.epsilon_ok = epsilon <= std::min(eps_cap, 0.1);
  plan.sigma_ok = sigma >= 1.0;
  const double n_cap =
      l1 > 0.0 ? 14.0 * ab.a * l0 / (5.0 * ab.b * l1 * epsilon) : inf;
  plan.workers_ok = n <= std::min(1.0 / epsilon, n_cap);

  const double i_real = std::floor(std::sqrt(1.0 / c_min) * sigma / (n * epsilon));
  plan.i_max = i_real < 9.0e18 ? static_cast<long>(i_real)
                               : std::numeric_limits<long>::max();

  const double gamma_term =
      l1 > 0.0 ? std::min(epsilon / (ab.a * l0), 1.0 / (ab.b * l1))
               : epsilon / (ab.a * l0);
  plan.gamma_max = c_min * n * epsilon / (28.0 * sigma) * gamma_term;
  plan.eta = plan.gamma_max / (5.0 * sigma);

  plan.total_iters_real = (1.0 / (c_min * c_min)) * 560.0 * ab.a * l0 * delta *
                          sigma * sigma /
                          (n * epsilon * epsilon * epsilon * epsilon);
  const double t_ceil = std::ceil(plan.total_iters_real);
  plan.total_iters =
      t_ceil < 9.0e18 ? static_cast<long long>(t_ceil) : -1;

  return plan;
}

TruncationReport truncated_expectation_mc(const NoiseModel& noise,
                                          const ParamVector& mean_shift,
                                          double alpha, long samples,
                                          std::uint64_t seed) {
  if (samples < 10000) {
    throw ConfigError("truncated_expectation_mc: need at least 1e4 samples");
  }
  if (!(alpha > 0.0)) {
    throw ConfigError("truncated_expectation_mc: alpha must be > 0");
  }
  const std::size_t dim = mean_shift.size();
  if (dim == 0) throw ConfigError("truncated_expectation_mc: empty mean_shift");
  validate_noise(noise, dim);

  TruncationReport report;
  report.alpha = alpha;
  report.samples = samples;

  // Accumulators: truncated value A_i = g_i 1(|g| <= alpha), indicator B,
  // and the raw g_i for the identifiability noise floor.
  std::vector<double> sum_a(dim, 0.0), sum_aa(dim, 0.0), sum_gg(dim, 0.0);
  long inside_count = 0;

  for (long k = 0; k < samples; ++k) {
    const ParamVector z =
        sample_noise(noise, dim, {seed, 0, static_cast<std::uint64_t>(k)});
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const double gi = mean_shift[i] + z[i];
      norm_sq += gi * gi;
      sum_gg[i] += gi * gi;
    }
    if (norm_sq <= alpha * alpha) {
      ++inside_count;
      for (std::size_t i = 0; i < dim; ++i) {
        const double gi = mean_shift[i] + z[i];
        sum_a[i] += gi;
        sum_aa[i] += gi * gi;
      }
    }
  }

  const double n = static_cast<double>(samples);
  const double p_hat = static_cast<double>(inside_count) / n;
  report.prob_inside = p_hat;
  report.truncated_mean.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) report.truncated_mean[i] = sum_a[i] / n;

  if (inside_count == 0) {
    report.pass = false;
    report.note = "Pr(|g| <= alpha) estimated 0: alpha too small";
    return report;
  }

  const double var_b = p_hat * (1.0 - p_hat);
  bool all_fits_ok = true;
  double residual_sq = 0.0, residual_var = 0.0;
  int identifiable = 0;

  for (std::size_t i = 0; i < dim; ++i) {
    CoordinateFit fit;
    fit.coordinate = static_cast<int>(i);
    const double mu = mean_shift[i];
    const double a_bar = sum_a[i] / n;
    const double var_a = std::max(sum_aa[i] / n - a_bar * a_bar, 0.0);
    const double var_g =
        std::max(sum_gg[i] / n - mu * mu, 0.0);  // true mean is known
    const double mean_se = std::sqrt(var_g / n);

    // Coordinates with |E[g_i]| inside the Monte-Carlo noise floor are the
    // symmetric 0 = 0 case of the identity; skip the ratio fit there.
    if (std::abs(mu) <= 5.0 * mean_se) {
      fit.identifiable = false;
      report.fits.push_back(fit);
      residual_sq += a_bar * a_bar;
      residual_var += var_a / n;
      continue;
    }

    fit.identifiable = true;
    ++identifiable;
    fit.c = a_bar / (p_hat * mu);
    const double cov_ab = a_bar - a_bar * p_hat;  // E[AB] = E[A] for B in {0,1}
    const double denom = p_hat * mu;
    const double var_c =
        (var_a / (denom * denom) +
         a_bar * a_bar * var_b / (denom * denom * p_hat * p_hat) -
         2.0 * a_bar * cov_ab / (denom * denom * p_hat)) /
        n;
    fit.std_error = std::sqrt(std::max(var_c, 0.0));
    const bool in_range =
        fit.c + 3.0 * fit.std_error > 0.0 && fit.c - 3.0 * fit.std_error <= 1.0;
    if (!in_range) all_fits_ok = false;
    report.fits.push_back(fit);
  }

  report.residual_norm = std::sqrt(residual_sq);
  report.residual_std_error = std::sqrt(residual_var);
  const bool residual_ok =
      report.residual_norm <= 4.0 * report.residual_std_error ||
      residual_sq == 0.0;

  if (identifiable == 0) {
    report.symmetric_zero_case = true;
    report.note =
        "all coordinate means are below the noise floor; the identity "
        "degenerates to 0 = 0 and only the residual is checked";
    report.pass = residual_ok;
  } else {
    report.pass = all_fits_ok && residual_ok;
  }
  return report;
}

bool check_mu_inequality(const ParamVector& u, const ParamVector& v,
                         double mu) {
  if (!(mu >= 0.0)) throw ConfigError("check_mu_inequality: mu must be >= 0");
  const double v_norm = euclidean_norm(v);
  if (v_norm == 0.0) {
    throw InvalidVectorError("check_mu_inequality: v must be nonzero");
  }
  const double u_norm = euclidean_norm(u);
  const double diff_norm = euclidean_norm(sub(v, u));
  const double lhs = -dot(u, v) / v_norm;
  const double rhs =
      -mu * u_norm - (1.0 - mu) * v_norm + (1.0 + mu) * diff_norm;
  return lhs <= rhs + 1e-10;
}

bool check_descent_inequality(const ObjectiveSpec& obj, const ParamVector& x,
                              const ParamVector& x_next, double c) {
  const ABConstants ab = ab_constants(c);
  const ParamVector step = sub(x_next, x);
  const double dist = euclidean_norm(step);
  if (obj.l1 > 0.0 && dist > c / obj.l1) {
    throw ConfigError(
        "check_descent_inequality: |x' - x| exceeds c/L1; the inequality's "
        "precondition does not hold");
  }
  const ParamVector g = obj.gradient(x);
  const double grad_norm = euclidean_norm(g);
  const double lhs = obj.value(x_next);
  const double rhs = obj.value(x) + dot(g, step) +
                     0.5 * (ab.a * obj.l0 + ab.b * obj.l1 * grad_norm) * dist *
                         dist;
  return lhs <= rhs + 1e-8;
}

}  // namespace celgc
