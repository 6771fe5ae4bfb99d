#pragma once

#include <optional>
#include <string>
#include <vector>

#include "celgc/algorithms.hpp"
#include "celgc/config.hpp"
#include "celgc/csv.hpp"

namespace celgc {

/// Per-seed outcome of one experiment run.
struct SeedSummary {
  std::uint64_t seed = 0;
  std::optional<long> iters_to_target;
  std::optional<long> comm_to_target;
  double final_grad_norm = 0.0;
  double final_f = 0.0;
  long comm_rounds = 0;
  bool diverged = false;
};

struct ExperimentResult {
  std::string run_id_base;
  std::vector<std::uint64_t> seeds;
  std::vector<RunTrace> traces;
  std::vector<SeedSummary> summaries;
  /// Paths written by run_experiment (empty when run in memory).
  std::vector<std::string> trace_paths;
  std::string summary_path;

  bool all_seeds_diverged() const;
};

/// Deterministic identifier used in the run_id CSV column.
std::string make_run_id(const ExperimentConfig& cfg, std::uint64_t seed);

/// Smallest recorded iteration whose average-iterate gradient norm is at most
/// epsilon; nullopt if the trace never reaches it or diverged.
std::optional<long> iterations_to_target(const RunTrace& trace, double epsilon);

/// Communication rounds accumulated at that first on-target record.
std::optional<long> comm_rounds_to_target(const RunTrace& trace,
                                          double epsilon);

/// Executes the configured algorithm once per seed; no file output.
ExperimentResult run_experiment_in_memory(const ExperimentConfig& cfg);

/// As above, plus one trace CSV per seed ("<output>.seed<k>.trace.csv") and a
/// summary CSV ("<output>.summary.csv"). Byte-identical outputs for identical
/// configs.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

CsvWriter trace_csv(const ExperimentConfig& cfg, std::uint64_t seed,
                    const RunTrace& trace);
CsvWriter summary_csv(const ExperimentConfig& cfg,
                      const ExperimentResult& result);

struct SweepCell {
  long axis_value = 0;
  int seeds_total = 0;
  int reached = 0;
  int diverged = 0;
  // Statistics over seeds that reached the target.
  double iters_mean = 0.0;
  double iters_std = 0.0;
  double comm_mean = 0.0;
  double comm_std = 0.0;
  // Over all non-diverged seeds.
  double final_grad_mean = 0.0;
  double final_grad_std = 0.0;
  /// iters_mean (speedup sweep) or comm_mean (communication sweep) relative
  /// to the baseline cell; NaN when either mean is undefined.
  double ratio_to_base = 0.0;

  bool has_mean() const { return reached > 0; }
};

struct SweepResult {
  std::string axis_name;  // "N" or "I"
  std::vector<SweepCell> cells;
};

/// Runs CELGC per worker count. n_list must contain 1 (the baseline cell).
/// Desk/theorem configs re-derive (eta, gamma) per cell from the plan at that
/// cell's N; manual configs hold them fixed.
SweepResult speedup_sweep(const ExperimentConfig& base,
                          const std::vector<int>& n_list);

/// Runs CELGC per sync interval at fixed N. i_list must contain 1.
SweepResult communication_sweep(const ExperimentConfig& base,
                                const std::vector<long>& i_list);

CsvWriter sweep_csv(const SweepResult& result);

}  // namespace celgc
