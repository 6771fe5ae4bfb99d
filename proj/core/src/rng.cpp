#include "celgc/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace celgc {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t mix_key(std::uint64_t seed, std::uint64_t worker,
                      std::uint64_t iteration) {
  std::uint64_t s = mix64(seed + kGolden);
  s = mix64(s ^ (worker + 0xbf58476d1ce4e5b9ull));
  s = mix64(s ^ (iteration + 0x94d049bb133111ebull));
  return s;
}

}  // namespace

CounterRng::CounterRng(const RngStream& key)
    : state_(mix_key(key.seed, key.worker_id, key.iteration)) {}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t worker_id,
                       std::uint64_t iteration)
    : state_(mix_key(seed, worker_id, iteration)) {}

std::uint64_t CounterRng::next_u64() {
  state_ += kGolden;
  return mix64(state_);
}

double CounterRng::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t CounterRng::next_below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("next_below: n must be positive");
  const std::uint64_t threshold = (-n) % n;
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r >= threshold) return r % n;
  }
}

double CounterRng::next_gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] so the log is finite.
  const double u1 = 1.0 - next_unit();
  const double u2 = next_unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

std::vector<double> CounterRng::next_gaussian_vector(std::size_t dim) {
  std::vector<double> out(dim);
  for (std::size_t i = 0; i < dim; ++i) out[i] = next_gaussian();
  return out;
}

}  // namespace celgc
