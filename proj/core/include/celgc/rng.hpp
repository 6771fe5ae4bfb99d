#pragma once

#include <cstdint>
#include <vector>

namespace celgc {

/// Key identifying one independent random stream. Sample sequences are pure
/// functions of (seed, worker_id, iteration), so results never depend on
/// scheduling or on how many draws other streams made.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t worker_id = 0;
  std::uint64_t iteration = 0;
};

/// worker_id reserved for synchronization-event randomness (participant
/// selection), so it can never collide with a real worker.
inline constexpr std::uint64_t kSyncWorkerId = ~std::uint64_t{0};

/// Counter-based generator: a splitmix64 sequence started from a mixed
/// (seed, worker_id, iteration) state. Bit-stable across platforms; no
/// libstdc++ distributions are used anywhere in the library.
class CounterRng {
 public:
  explicit CounterRng(const RngStream& key);
  CounterRng(std::uint64_t seed, std::uint64_t worker_id,
             std::uint64_t iteration);

  std::uint64_t next_u64();

  /// Uniform in [0, 1), 53-bit resolution.
  double next_unit();

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t next_below(std::uint64_t n);

  /// One standard Gaussian deviate (Box-Muller; pairs are cached).
  double next_gaussian();

  /// dim iid standard Gaussian deviates.
  std::vector<double> next_gaussian_vector(std::size_t dim);

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace celgc
