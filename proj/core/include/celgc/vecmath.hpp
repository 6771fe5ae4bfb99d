#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "celgc/errors.hpp"

namespace celgc {

/// A point or gradient in R^d. The dimension is the size and is fixed per
/// experiment; all entries must stay finite.
using ParamVector = std::vector<double>;

/// Diagonal weighting matrix with entries in (0, 1].
struct LambdaDiag {
  std::vector<double> diag;
  double c_min = 0.0;
  double c_max = 0.0;

  /// Validates 0 < c_i <= 1 and computes c_min/c_max.
  static LambdaDiag make(std::vector<double> entries);

  static LambdaDiag identity(std::size_t dim);
};

bool is_finite(const ParamVector& v);

/// sqrt(sum v_i^2). Throws InvalidVectorError on non-finite input.
double euclidean_norm(const ParamVector& v);

/// sqrt(sum c_i v_i^2). Satisfies
/// sqrt(c_min)*|v| <= |v|_Lambda <= sqrt(c_max)*|v|.
double lambda_norm(const ParamVector& v, const LambdaDiag& lambda);

double dot(const ParamVector& a, const ParamVector& b);

/// y += a * x
void axpy(double a, const ParamVector& x, ParamVector& y);

ParamVector scale(double s, const ParamVector& v);

ParamVector add(const ParamVector& a, const ParamVector& b);
ParamVector sub(const ParamVector& a, const ParamVector& b);

/// Arithmetic mean of a nonempty list of equal-dimension vectors.
ParamVector average(std::span<const ParamVector> vs);

}  // namespace celgc
