#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "celgc/noise.hpp"
#include "celgc/objectives.hpp"
#include "celgc/vecmath.hpp"

namespace celgc {

/// Constants of the relaxed-smoothness descent machinery:
/// A = 1 + e^c - (e^c - 1)/c,  B = (e^c - 1)/c. Both are >= 1 and increase
/// with c; the hyperparameter calculator fixes c = 1/2.
struct ABConstants {
  double c = 0.0;
  double a = 0.0;
  double b = 0.0;
};

ABConstants ab_constants(double c);

/// Hyperparameter plan derived from the convergence guarantee. Infeasible
/// inputs still produce the numbers, with the violated precondition flags
/// cleared.
struct TheoremOnePlan {
  // Inputs.
  double epsilon = 0.0;
  int workers = 0;
  double sigma = 0.0;
  double l0 = 0.0;
  double l1 = 0.0;
  double delta = 0.0;
  double c_min = 1.0;

  // Derived (at c = 1/2).
  double a_const = 0.0;
  double b_const = 0.0;
  /// floor(sqrt(1/c_min) * sigma / (N eps)); largest admissible sync interval.
  long i_max = 0;
  /// c_min * N eps / (28 sigma) * min(eps/(A L0), 1/(B L1)).
  double gamma_max = 0.0;
  /// gamma_max / (5 sigma); the fixed ratio gamma/eta = 5 sigma.
  double eta = 0.0;
  /// ceil(560 A L0 Delta sigma^2 / (c_min^2 N eps^4)); -1 if it overflows.
  long long total_iters = 0;
  double total_iters_real = 0.0;

  // Precondition flags (true = satisfied).
  bool epsilon_ok = false;
  bool sigma_ok = false;
  bool workers_ok = false;

  bool feasible() const { return epsilon_ok && sigma_ok && workers_ok; }
};

/// Evaluates the plan. All inputs must be positive (workers >= 1); violations
/// of the theorem's preconditions are reported via flags, not exceptions.
TheoremOnePlan theorem1_plan(double epsilon, int workers, double sigma,
                             double l0, double l1, double delta, double c_min);

/// Per-coordinate truncation fit: c_i = E[g_i 1(|g| <= alpha)] / (P * E[g_i]).
struct CoordinateFit {
  int coordinate = 0;
  double c = 0.0;
  double std_error = 0.0;
  /// Coordinates whose true mean is within the noise floor are reported but
  /// not fitted (the identity is 0 = 0 there).
  bool identifiable = false;
};

struct TruncationReport {
  double alpha = 0.0;
  long samples = 0;
  /// Monte-Carlo estimate of Pr(|g| <= alpha).
  double prob_inside = 0.0;
  std::vector<CoordinateFit> fits;
  std::vector<double> truncated_mean;  // E-hat[g 1(|g| <= alpha)]
  /// Norm of the truncated mean restricted to unidentifiable coordinates,
  /// and the 1-sigma Monte-Carlo error of that quantity.
  double residual_norm = 0.0;
  double residual_std_error = 0.0;
  bool symmetric_zero_case = false;
  bool pass = false;
  std::string note;
};

/// Monte-Carlo check of the truncated-expectation identity for
/// g = mean_shift + noise. Fits one c per identifiable coordinate and
/// requires each to lie in (0, 1] within 3 standard errors; unidentifiable
/// coordinates must have truncated means consistent with zero.
TruncationReport truncated_expectation_mc(const NoiseModel& noise,
                                          const ParamVector& mean_shift,
                                          double alpha, long samples,
                                          std::uint64_t seed);

/// -<u,v>/|v| <= -mu|u| - (1-mu)|v| + (1+mu)|v-u|, checked with 1e-10 slack.
/// Requires v != 0 and mu >= 0.
bool check_mu_inequality(const ParamVector& u, const ParamVector& v, double mu);

/// f(x') <= f(x) + <grad f(x), x'-x> + (A L0 + B L1 |grad f(x)|)/2 |x'-x|^2
/// with (A, B) = ab_constants(c), checked with 1e-8 slack. Requires
/// |x'-x| <= c/L1 when L1 > 0.
bool check_descent_inequality(const ObjectiveSpec& obj, const ParamVector& x,
                              const ParamVector& x_next, double c);

}  // namespace celgc
