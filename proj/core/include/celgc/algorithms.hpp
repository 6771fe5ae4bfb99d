#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "celgc/noise.hpp"
#include "celgc/objectives.hpp"
#include "celgc/rng.hpp"
#include "celgc/vecmath.hpp"

namespace celgc {

struct HyperParams {
  /// Unclipped step size.
  double eta = 0.0;
  /// Bound on the step length when clipping is active.
  double gamma = 0.0;
  /// Synchronization interval (local steps between averaging events).
  long sync_interval = 1;
  /// Total iterations.
  long total_iters = 0;
  /// Worker count.
  int workers = 1;
  /// Workers averaged per sync event; workers == participation reproduces
  /// full participation.
  int participation = 1;

  /// Clipping is active iff the stochastic gradient norm >= gamma / eta.
  double clip_threshold() const { return gamma / eta; }

  /// Structural checks shared by all algorithms (eta = 0 is allowed; plain
  /// SGD uses it for the frozen-iterate edge case).
  void validate() const;
  /// Additionally requires eta > 0 and gamma > 0.
  void validate_clipped() const;
};

struct WorkerState {
  int worker_id = 0;
  ParamVector x;
  long clip_count = 0;
  long step_count = 0;
};

struct MetricRecord {
  long t = 0;
  double f_avg_iterate = 0.0;
  /// Norm of the analytic gradient at the worker-average iterate.
  double grad_norm_avg_iterate = 0.0;
  /// max_i |xbar - x_i|; zero for single-iterate algorithms.
  double consensus_max_dev = 0.0;
  /// Fraction of worker steps since the previous record that clipped.
  double clip_fraction_window = 0.0;
  long comm_rounds_so_far = 0;
};

struct RunTrace {
  std::vector<MetricRecord> records;
  long comm_rounds = 0;
  ParamVector final_avg_iterate;
  bool diverged = false;
  /// Iteration at which divergence was detected (-1 if none).
  long diverged_at = -1;
};

/// x - min(eta, gamma/|g|) * g. A zero gradient takes the full-eta branch;
/// either way the update is zero. The applied step length never exceeds gamma.
ParamVector clipped_step(const ParamVector& x, const ParamVector& g, double eta,
                         double gamma);

/// True iff |g| >= gamma / eta (ties count as clipped).
bool clip_active(double grad_norm, double eta, double gamma);

/// Replaces each of `participation` randomly chosen workers' iterates by the
/// mean over the chosen set; the rest keep their local iterates. Choosing all
/// workers is the plain periodic-averaging reset.
void sync_average(std::vector<WorkerState>& workers, int participation,
                  CounterRng& rng);

/// Local clipped steps on every worker with periodic (partial) averaging
/// every sync_interval iterations. One communication round per averaging
/// event.
RunTrace run_celgc(const ObjectiveSpec& obj, const NoiseModel& noise,
                   const HyperParams& hp, const ParamVector& x0,
                   std::uint64_t seed, long record_every);

/// Baseline that averages the workers' stochastic gradients at the shared
/// iterate every iteration and applies one clipped step; one communication
/// round per iteration.
RunTrace run_naive_parallel_clip(const ObjectiveSpec& obj,
                                 const NoiseModel& noise, const HyperParams& hp,
                                 const ParamVector& x0, std::uint64_t seed,
                                 long record_every);

/// Single-machine clipped SGD (workers must be 1); no communication.
RunTrace run_clipped_sgd(const ObjectiveSpec& obj, const NoiseModel& noise,
                         const HyperParams& hp, const ParamVector& x0,
                         std::uint64_t seed, long record_every);

/// Fixed-step SGD baseline; divergence-prone on relaxed-smooth objectives and
/// recorded (not thrown) when it happens.
RunTrace run_sgd(const ObjectiveSpec& obj, const NoiseModel& noise,
                 const HyperParams& hp, const ParamVector& x0,
                 std::uint64_t seed, long record_every);

/// Dispatch by config-file algorithm name.
RunTrace run_algorithm(const std::string& name, const ObjectiveSpec& obj,
                       const NoiseModel& noise, const HyperParams& hp,
                       const ParamVector& x0, std::uint64_t seed,
                       long record_every);

}  // namespace celgc
