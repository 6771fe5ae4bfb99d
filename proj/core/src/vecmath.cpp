#include "celgc/vecmath.hpp"

#include <algorithm>
#include <cmath>

namespace celgc {

namespace {

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) {
    throw DimensionMismatchError("dimension mismatch: " + std::to_string(a) +
                                 " vs " + std::to_string(b));
  }
}

}  // namespace

LambdaDiag LambdaDiag::make(std::vector<double> entries) {
  if (entries.empty()) {
    throw ConfigError("LambdaDiag requires at least one entry");
  }
  for (double c : entries) {
    if (!(c > 0.0) || !(c <= 1.0)) {
      throw ConfigError("LambdaDiag entries must lie in (0, 1], got " +
                        std::to_string(c));
    }
  }
  LambdaDiag lambda;
  lambda.c_min = *std::min_element(entries.begin(), entries.end());
  lambda.c_max = *std::max_element(entries.begin(), entries.end());
  lambda.diag = std::move(entries);
  return lambda;
}

LambdaDiag LambdaDiag::identity(std::size_t dim) {
  return make(std::vector<double>(dim, 1.0));
}

bool is_finite(const ParamVector& v) {
  return std::all_of(v.begin(), v.end(),
                     [](double x) { return std::isfinite(x); });
}

double euclidean_norm(const ParamVector& v) {
  if (!is_finite(v)) {
    throw InvalidVectorError("euclidean_norm: non-finite entry");
  }
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

double lambda_norm(const ParamVector& v, const LambdaDiag& lambda) {
  require_same_dim(v.size(), lambda.diag.size());
  if (!is_finite(v)) {
    throw InvalidVectorError("lambda_norm: non-finite entry");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) sum += lambda.diag[i] * v[i] * v[i];
  return std::sqrt(sum);
}

double dot(const ParamVector& a, const ParamVector& b) {
  require_same_dim(a.size(), b.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

void axpy(double a, const ParamVector& x, ParamVector& y) {
  require_same_dim(x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

ParamVector scale(double s, const ParamVector& v) {
  ParamVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = s * v[i];
  return out;
}

ParamVector add(const ParamVector& a, const ParamVector& b) {
  require_same_dim(a.size(), b.size());
  ParamVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

ParamVector sub(const ParamVector& a, const ParamVector& b) {
  require_same_dim(a.size(), b.size());
  ParamVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

ParamVector average(std::span<const ParamVector> vs) {
  if (vs.empty()) {
    throw InvalidVectorError("average: empty list");
  }
  ParamVector sum(vs.front().size(), 0.0);
  for (const ParamVector& v : vs) {
    require_same_dim(v.size(), sum.size());
    for (std::size_t i = 0; i < v.size(); ++i) sum[i] += v[i];
  }
  const double inv = 1.0 / static_cast<double>(vs.size());
  for (double& x : sum) x *= inv;
  return sum;
}

}  // namespace celgc
