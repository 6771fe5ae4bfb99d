#include "celgc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

namespace celgc {

namespace {

const std::vector<std::string> kTraceHeader = {
    "run_id", "algo",  "objective", "dim",
    "N",      "I",     "eta",       "gamma",
    "sigma",  "seed",  "t",         "f_avg_iterate",
    "grad_norm_avg_iterate", "consensus_max_dev",
    "clip_fraction_window",  "comm_rounds_so_far"};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd out;
  if (xs.empty()) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(xs.size());
  double sq = 0.0;
  for (double x : xs) sq += (x - out.mean) * (x - out.mean);
  out.std = std::sqrt(sq / static_cast<double>(xs.size()));
  return out;
}

void ensure_parent_dir(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

SweepCell summarize_cell(long axis_value, const ExperimentResult& result,
                         double epsilon) {
  SweepCell cell;
  cell.axis_value = axis_value;
  cell.seeds_total = static_cast<int>(result.summaries.size());
  std::vector<double> iters, comms, grads;
  for (const SeedSummary& s : result.summaries) {
    if (s.diverged) {
      ++cell.diverged;
      continue;
    }
    grads.push_back(s.final_grad_norm);
    if (s.iters_to_target) {
      ++cell.reached;
      iters.push_back(static_cast<double>(*s.iters_to_target));
      comms.push_back(static_cast<double>(s.comm_to_target.value_or(0)));
    }
  }
  const MeanStd mi = mean_std(iters), mc = mean_std(comms), mg = mean_std(grads);
  cell.iters_mean = mi.mean;
  cell.iters_std = mi.std;
  cell.comm_mean = mc.mean;
  cell.comm_std = mc.std;
  cell.final_grad_mean = mg.mean;
  cell.final_grad_std = mg.std;
  (void)epsilon;
  return cell;
}

}  // namespace

bool ExperimentResult::all_seeds_diverged() const {
  if (summaries.empty()) return false;
  return std::all_of(summaries.begin(), summaries.end(),
                     [](const SeedSummary& s) { return s.diverged; });
}

std::string make_run_id(const ExperimentConfig& cfg, std::uint64_t seed) {
  std::ostringstream id;
  id << cfg.algorithm << '-' << cfg.objective_name << "-d" << cfg.dim << "-N"
     << cfg.workers << "-I" << cfg.sync_interval << "-seed" << seed;
  return id.str();
}

std::optional<long> iterations_to_target(const RunTrace& trace,
                                         double epsilon) {
  if (trace.diverged) return std::nullopt;
  for (const MetricRecord& r : trace.records) {
    if (r.grad_norm_avg_iterate <= epsilon) return r.t;
  }
  return std::nullopt;
}

std::optional<long> comm_rounds_to_target(const RunTrace& trace,
                                          double epsilon) {
  if (trace.diverged) return std::nullopt;
  for (const MetricRecord& r : trace.records) {
    if (r.grad_norm_avg_iterate <= epsilon) return r.comm_rounds_so_far;
  }
  return std::nullopt;
}

ExperimentResult run_experiment_in_memory(const ExperimentConfig& cfg) {
  const ObjectiveSpec obj = cfg.build_objective();
  const NoiseModel noise = cfg.build_noise();
  const HyperParams hp = cfg.resolve_hyperparams();
  const ParamVector x0 = cfg.build_x0();

  ExperimentResult result;
  result.seeds = cfg.seeds;
  result.run_id_base = make_run_id(cfg, 0);
  for (std::uint64_t seed : cfg.seeds) {
    RunTrace trace = run_algorithm(cfg.algorithm, obj, noise, hp, x0, seed,
                                   cfg.record_every);
    SeedSummary summary;
    summary.seed = seed;
    summary.diverged = trace.diverged;
    summary.iters_to_target = iterations_to_target(trace, cfg.epsilon_target);
    summary.comm_to_target = comm_rounds_to_target(trace, cfg.epsilon_target);
    summary.comm_rounds = trace.comm_rounds;
    if (!trace.records.empty()) {
      summary.final_grad_norm = trace.records.back().grad_norm_avg_iterate;
      summary.final_f = trace.records.back().f_avg_iterate;
    }
    result.summaries.push_back(summary);
    result.traces.push_back(std::move(trace));
  }
  return result;
}

CsvWriter trace_csv(const ExperimentConfig& cfg, std::uint64_t seed,
                    const RunTrace& trace) {
  const HyperParams hp = cfg.resolve_hyperparams();
  CsvWriter csv(kTraceHeader);
  const std::string run_id = make_run_id(cfg, seed);
  for (const MetricRecord& r : trace.records) {
    csv.add_row({run_id, cfg.algorithm, cfg.objective_name,
                 std::to_string(cfg.dim), std::to_string(cfg.workers),
                 std::to_string(cfg.sync_interval), format_double(hp.eta),
                 format_double(hp.gamma), format_double(cfg.sigma),
                 std::to_string(seed), std::to_string(r.t),
                 format_double(r.f_avg_iterate),
                 format_double(r.grad_norm_avg_iterate),
                 format_double(r.consensus_max_dev),
                 format_double(r.clip_fraction_window),
                 std::to_string(r.comm_rounds_so_far)});
  }
  return csv;
}

CsvWriter summary_csv(const ExperimentConfig& cfg,
                      const ExperimentResult& result) {
  const HyperParams hp = cfg.resolve_hyperparams();
  CsvWriter csv({"run_id", "algo", "objective", "dim", "N", "I", "eta",
                 "gamma", "sigma", "seed", "iters_to_target",
                 "comm_rounds_to_target", "final_grad_norm", "final_f",
                 "comm_rounds_total", "diverged"});
  for (const SeedSummary& s : result.summaries) {
    csv.add_row({make_run_id(cfg, s.seed), cfg.algorithm, cfg.objective_name,
                 std::to_string(cfg.dim), std::to_string(cfg.workers),
                 std::to_string(cfg.sync_interval), format_double(hp.eta),
                 format_double(hp.gamma), format_double(cfg.sigma),
                 std::to_string(s.seed), format_optional(s.iters_to_target),
                 format_optional(s.comm_to_target),
                 format_double(s.final_grad_norm), format_double(s.final_f),
                 std::to_string(s.comm_rounds),
                 s.diverged ? "1" : "0"});
  }
  return csv;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult result = run_experiment_in_memory(cfg);
  ensure_parent_dir(cfg.output);
  for (std::size_t i = 0; i < result.traces.size(); ++i) {
    const std::string path = cfg.output + ".seed" +
                             std::to_string(cfg.seeds[i]) + ".trace.csv";
    trace_csv(cfg, cfg.seeds[i], result.traces[i]).write_file(path);
    result.trace_paths.push_back(path);
  }
  result.summary_path = cfg.output + ".summary.csv";
  summary_csv(cfg, result).write_file(result.summary_path);
  return result;
}

SweepResult speedup_sweep(const ExperimentConfig& base,
                          const std::vector<int>& n_list) {
  if (n_list.empty()) throw ConfigError("speedup sweep: empty N list");
  if (std::find(n_list.begin(), n_list.end(), 1) == n_list.end()) {
    throw ConfigError("speedup sweep: N list must include the N=1 baseline");
  }
  SweepResult result;
  result.axis_name = "N";
  double base_mean = std::nan("");
  for (int n : n_list) {
    ExperimentConfig cfg = base;
    cfg.algorithm = "celgc";
    cfg.workers = n;
    cfg.participation = 0;  // full participation at each cell size
    // Desk/theorem modes re-derive (eta, gamma) inside resolve_hyperparams
    // from the plan at this N; manual holds the base values.
    ExperimentResult run = run_experiment_in_memory(cfg);
    SweepCell cell = summarize_cell(n, run, cfg.epsilon_target);
    if (n == 1 && cell.has_mean()) base_mean = cell.iters_mean;
    result.cells.push_back(cell);
  }
  for (SweepCell& cell : result.cells) {
    cell.ratio_to_base = (cell.has_mean() && std::isfinite(base_mean))
                             ? cell.iters_mean / base_mean
                             : std::nan("");
  }
  return result;
}

SweepResult communication_sweep(const ExperimentConfig& base,
                                const std::vector<long>& i_list) {
  if (i_list.empty()) throw ConfigError("communication sweep: empty I list");
  if (std::find(i_list.begin(), i_list.end(), 1L) == i_list.end()) {
    throw ConfigError("communication sweep: I list must include I=1");
  }
  SweepResult result;
  result.axis_name = "I";
  double base_mean = std::nan("");
  for (long i : i_list) {
    ExperimentConfig cfg = base;
    cfg.algorithm = "celgc";
    cfg.sync_interval = i;
    ExperimentResult run = run_experiment_in_memory(cfg);
    SweepCell cell = summarize_cell(i, run, cfg.epsilon_target);
    if (i == 1 && cell.has_mean()) base_mean = cell.comm_mean;
    result.cells.push_back(cell);
  }
  for (SweepCell& cell : result.cells) {
    cell.ratio_to_base = (cell.has_mean() && std::isfinite(base_mean))
                             ? cell.comm_mean / base_mean
                             : std::nan("");
  }
  return result;
}

CsvWriter sweep_csv(const SweepResult& result) {
  CsvWriter csv({result.axis_name, "seeds", "reached", "diverged",
                 "iters_to_target_mean", "iters_to_target_std",
                 "comm_to_target_mean", "comm_to_target_std",
                 "final_grad_mean", "final_grad_std", "ratio_to_base"});
  for (const SweepCell& c : result.cells) {
    const bool ok = c.has_mean();
    csv.add_row({std::to_string(c.axis_value), std::to_string(c.seeds_total),
                 std::to_string(c.reached), std::to_string(c.diverged),
                 ok ? format_double(c.iters_mean) : "",
                 ok ? format_double(c.iters_std) : "",
                 ok ? format_double(c.comm_mean) : "",
                 ok ? format_double(c.comm_std) : "",
                 format_double(c.final_grad_mean),
                 format_double(c.final_grad_std),
                 ok && std::isfinite(c.ratio_to_base)
                     ? format_double(c.ratio_to_base)
                     : ""});
  }
  return csv;
}

}  // namespace celgc
