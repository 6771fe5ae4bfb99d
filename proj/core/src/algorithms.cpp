#include "celgc/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace celgc {

namespace {

// A run whose objective value exceeds this (or loses finiteness) is flagged
// diverged and its trace truncated.
constexpr double kDivergenceFMax = 1e12;
constexpr double kLemma2Slack = 1e-9;

// Non-throwing norm; NaN/Inf propagate into the result.
double raw_norm(const ParamVector& v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

double step_scale(double grad_norm, double eta, double gamma) {
  if (grad_norm == 0.0) return eta;  // update is zero either way
  return std::min(eta, gamma / grad_norm);
}

ParamVector worker_average(const std::vector<WorkerState>& workers) {
  ParamVector sum(workers.front().x.size(), 0.0);
  for (const WorkerState& w : workers) {
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += w.x[i];
  }
  const double inv = 1.0 / static_cast<double>(workers.size());
  for (double& x : sum) x *= inv;
  return sum;
}

double max_consensus_deviation(const std::vector<WorkerState>& workers,
                               const ParamVector& xbar) {
  double max_dev = 0.0;
  for (const WorkerState& w : workers) {
    double sum = 0.0;
    for (std::size_t i = 0; i < xbar.size(); ++i) {
      const double d = xbar[i] - w.x[i];
      sum += d * d;
    }
    max_dev = std::max(max_dev, std::sqrt(sum));
  }
  return max_dev;
}

// Shared recording / divergence bookkeeping across the four algorithms.
class TraceBuilder {
 public:
  TraceBuilder(const ObjectiveSpec& obj, long record_every, long total_iters)
      : obj_(obj), record_every_(record_every), total_iters_(total_iters) {
    if (record_every < 1) {
      throw ConfigError("record_every must be >= 1");
    }
  }

  void count_step(bool clipped) {
    ++window_steps_;
    if (clipped) ++window_clips_;
  }

  /// Divergence check + cadence recording after iteration t (1-based).
  /// Returns false once the run is diverged; the caller stops.
  bool observe(long t, const ParamVector& xbar, double consensus,
               long comm_rounds) {
    if (!is_finite(xbar)) return mark_diverged(t);
    const double f = obj_.value(xbar);
    if (!std::isfinite(f) || f > kDivergenceFMax) return mark_diverged(t);
    trace_.final_avg_iterate = xbar;
    const bool due =
        t == 0 || t == total_iters_ || (t % record_every_) == 0;
    if (!due) return true;
    MetricRecord rec;
    rec.t = t;
    rec.f_avg_iterate = f;
    rec.grad_norm_avg_iterate = raw_norm(obj_.gradient(xbar));
    rec.consensus_max_dev = consensus;
    rec.clip_fraction_window =
        window_steps_ == 0
            ? 0.0
            : static_cast<double>(window_clips_) /
                  static_cast<double>(window_steps_);
    rec.comm_rounds_so_far = comm_rounds;
    trace_.records.push_back(rec);
    window_steps_ = 0;
    window_clips_ = 0;
    return true;
  }

  bool mark_diverged(long t) {
    trace_.diverged = true;
    trace_.diverged_at = t;
    return false;
  }

  RunTrace take(long comm_rounds) {
    trace_.comm_rounds = comm_rounds;
    return std::move(trace_);
  }

 private:
  const ObjectiveSpec& obj_;
  long record_every_;
  long total_iters_;
  long window_steps_ = 0;
  long window_clips_ = 0;
  RunTrace trace_;
};

void require_x0(const ObjectiveSpec& obj, const ParamVector& x0) {
  if (static_cast<int>(x0.size()) != obj.dim) {
    throw DimensionMismatchError("x0 dim " + std::to_string(x0.size()) +
                                 " does not match objective dim " +
                                 std::to_string(obj.dim));
  }
  if (!is_finite(x0)) throw InvalidVectorError("x0 has non-finite entries");
}

}  // namespace

void HyperParams::validate() const {
  if (total_iters < 0) throw ConfigError("iters must be >= 0");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (participation < 1 || participation > workers) {
    throw ConfigError("participation must lie in [1, workers]");
  }
  if (sync_interval < 1) throw ConfigError("sync_interval must be >= 1");
  if (!(eta >= 0.0)) throw ConfigError("eta must be >= 0");
}

void HyperParams::validate_clipped() const {
  validate();
  if (!(eta > 0.0)) throw ConfigError("eta must be > 0");
  if (!(gamma > 0.0)) throw ConfigError("gamma must be > 0");
}

bool clip_active(double grad_norm, double eta, double gamma) {
  return grad_norm * eta >= gamma;
}

ParamVector clipped_step(const ParamVector& x, const ParamVector& g, double eta,
                         double gamma) {
  if (!(eta > 0.0) || !(gamma > 0.0)) {
    throw ConfigError("clipped_step: eta and gamma must be > 0");
  }
  if (x.size() != g.size()) {
    throw DimensionMismatchError("clipped_step: dim mismatch");
  }
  if (!is_finite(g)) throw InvalidVectorError("clipped_step: non-finite g");
  const double s = step_scale(raw_norm(g), eta, gamma);
  ParamVector out = x;
  axpy(-s, g, out);
  return out;
}

void sync_average(std::vector<WorkerState>& workers, int participation,
                  CounterRng& rng) {
  const int n = static_cast<int>(workers.size());
  if (participation < 1 || participation > n) {
    throw ConfigError("sync_average: participation must lie in [1, workers]");
  }
  std::vector<int> chosen;
  if (participation == n) {
    chosen.resize(n);
    std::iota(chosen.begin(), chosen.end(), 0);
  } else {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (int j = 0; j < participation; ++j) {
      const auto r = static_cast<int>(rng.next_below(
          static_cast<std::uint64_t>(n - j)));
      std::swap(idx[j], idx[j + r]);
    }
    chosen.assign(idx.begin(), idx.begin() + participation);
    std::sort(chosen.begin(), chosen.end());
  }

  ParamVector mean(workers.front().x.size(), 0.0);
  for (int i : chosen) {
    for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += workers[i].x[k];
  }
  const double inv = 1.0 / static_cast<double>(chosen.size());
  for (double& x : mean) x *= inv;
  for (int i : chosen) workers[i].x = mean;
}

RunTrace run_celgc(const ObjectiveSpec& obj, const NoiseModel& noise,
                   const HyperParams& hp, const ParamVector& x0,
                   std::uint64_t seed, long record_every) {
  hp.validate_clipped();
  require_x0(obj, x0);
  validate_noise(noise, x0.size());

  std::vector<WorkerState> workers(hp.workers);
  for (int i = 0; i < hp.workers; ++i) {
    workers[i].worker_id = i;
    workers[i].x = x0;
  }

  TraceBuilder builder(obj, record_every, hp.total_iters);
  long comm_rounds = 0;
  const double lemma2_bound =
      2.0 * hp.gamma * static_cast<double>(hp.sync_interval) + kLemma2Slack;

  ParamVector xbar = worker_average(workers);
  if (!builder.observe(0, xbar, 0.0, comm_rounds)) return builder.take(0);

  for (long t = 0; t < hp.total_iters; ++t) {
    bool alive = true;
    for (WorkerState& w : workers) {
      const ParamVector g = stochastic_gradient(
          obj, noise, w.x,
          {seed, static_cast<std::uint64_t>(w.worker_id),
           static_cast<std::uint64_t>(t)});
      const double gn = raw_norm(g);
      if (!std::isfinite(gn)) {
        alive = builder.mark_diverged(t + 1);
        break;
      }
      const bool clipped = clip_active(gn, hp.eta, hp.gamma);
      axpy(-step_scale(gn, hp.eta, hp.gamma), g, w.x);
      ++w.step_count;
      if (clipped) ++w.clip_count;
      builder.count_step(clipped);
      if (!is_finite(w.x)) {
        alive = builder.mark_diverged(t + 1);
        break;
      }
    }
    if (!alive) break;

    if ((t + 1) % hp.sync_interval == 0) {
      CounterRng sync_rng(seed, kSyncWorkerId, static_cast<std::uint64_t>(t));
      sync_average(workers, hp.participation, sync_rng);
      ++comm_rounds;
    }

    xbar = worker_average(workers);
    const double consensus = max_consensus_deviation(workers, xbar);
    if (hp.participation == hp.workers && consensus > lemma2_bound) {
      throw std::logic_error(
          "consensus deviation " + std::to_string(consensus) +
          " exceeded the 2*gamma*I bound at iteration " + std::to_string(t + 1));
    }
    if (!builder.observe(t + 1, xbar, consensus, comm_rounds)) break;
  }
  return builder.take(comm_rounds);
}

namespace {

// Shared-iterate loop used by the naive-parallel baseline (clip = true) and
// plain SGD (clip = false). Gradients are averaged across workers each
// iteration; `communicates` decides whether that counts as a sync round.
RunTrace run_shared_iterate(const ObjectiveSpec& obj, const NoiseModel& noise,
                            const HyperParams& hp, const ParamVector& x0,
                            std::uint64_t seed, long record_every, bool clip,
                            bool communicates) {
  require_x0(obj, x0);
  validate_noise(noise, x0.size());

  ParamVector x = x0;
  TraceBuilder builder(obj, record_every, hp.total_iters);
  long comm_rounds = 0;

  if (!builder.observe(0, x, 0.0, comm_rounds)) return builder.take(0);

  std::vector<ParamVector> grads(hp.workers);
  for (long t = 0; t < hp.total_iters; ++t) {
    for (int i = 0; i < hp.workers; ++i) {
      grads[i] = stochastic_gradient(
          obj, noise, x,
          {seed, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(t)});
    }
    const ParamVector g = average(grads);
    const double gn = raw_norm(g);
    if (!std::isfinite(gn)) {
      builder.mark_diverged(t + 1);
      break;
    }
    bool clipped = false;
    double s = hp.eta;
    if (clip) {
      clipped = clip_active(gn, hp.eta, hp.gamma);
      s = step_scale(gn, hp.eta, hp.gamma);
    }
    axpy(-s, g, x);
    builder.count_step(clipped);
    if (communicates) ++comm_rounds;
    if (!builder.observe(t + 1, x, 0.0, comm_rounds)) break;
  }
  return builder.take(comm_rounds);
}

}  // namespace

RunTrace run_naive_parallel_clip(const ObjectiveSpec& obj,
                                 const NoiseModel& noise, const HyperParams& hp,
                                 const ParamVector& x0, std::uint64_t seed,
                                 long record_every) {
  hp.validate_clipped();
  // Synchronizes every iteration by definition, even for a single worker.
  return run_shared_iterate(obj, noise, hp, x0, seed, record_every,
                            /*clip=*/true, /*communicates=*/true);
}

RunTrace run_clipped_sgd(const ObjectiveSpec& obj, const NoiseModel& noise,
                         const HyperParams& hp, const ParamVector& x0,
                         std::uint64_t seed, long record_every) {
  hp.validate_clipped();
  if (hp.workers != 1) {
    throw ConfigError("clipped-sgd is single-machine (workers must be 1)");
  }
  return run_shared_iterate(obj, noise, hp, x0, seed, record_every,
                            /*clip=*/true, /*communicates=*/false);
}

RunTrace run_sgd(const ObjectiveSpec& obj, const NoiseModel& noise,
                 const HyperParams& hp, const ParamVector& x0,
                 std::uint64_t seed, long record_every) {
  hp.validate();
  return run_shared_iterate(obj, noise, hp, x0, seed, record_every,
                            /*clip=*/false,
                            /*communicates=*/hp.workers > 1);
}

RunTrace run_algorithm(const std::string& name, const ObjectiveSpec& obj,
                       const NoiseModel& noise, const HyperParams& hp,
                       const ParamVector& x0, std::uint64_t seed,
                       long record_every) {
  if (name == "celgc") {
    return run_celgc(obj, noise, hp, x0, seed, record_every);
  }
  if (name == "naive-parallel") {
    return run_naive_parallel_clip(obj, noise, hp, x0, seed, record_every);
  }
  if (name == "clipped-sgd") {
    return run_clipped_sgd(obj, noise, hp, x0, seed, record_every);
  }
  if (name == "sgd") {
    return run_sgd(obj, noise, hp, x0, seed, record_every);
  }
  throw ConfigError("unknown algorithm '" + name +
                    "' (expected celgc, naive-parallel, clipped-sgd, or sgd)");
}

}  // namespace celgc
