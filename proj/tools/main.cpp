// Command-line driver: experiment runs, sweeps, the hyperparameter plan
// calculator, and the verification subcommands.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "celgc/config.hpp"
#include "celgc/csv.hpp"
#include "celgc/experiment.hpp"
#include "celgc/svg.hpp"
#include "celgc/theory.hpp"

namespace {

// Exit codes: 0 ok, 1 config error, 2 all seeds diverged, 3 verification
// failure.
constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitDiverged = 2;
constexpr int kExitVerifyFailed = 3;

int cmd_run(const std::string& config_path) {
  const celgc::ExperimentConfig cfg = celgc::parse_config_file(config_path);
  const celgc::ExperimentResult result = celgc::run_experiment(cfg);
  for (const celgc::SeedSummary& s : result.summaries) {
    std::cout << "seed " << s.seed << ": ";
    if (s.diverged) {
      std::cout << "diverged";
    } else {
      std::cout << "final |grad| = " << celgc::format_double(s.final_grad_norm)
                << ", comm rounds = " << s.comm_rounds;
      if (s.iters_to_target) {
        std::cout << ", reached target at t = " << *s.iters_to_target;
      } else {
        std::cout << ", target not reached";
      }
    }
    std::cout << '\n';
  }
  std::cout << "summary: " << result.summary_path << '\n';
  return result.all_seeds_diverged() ? kExitDiverged : kExitOk;
}

void print_sweep(const celgc::SweepResult& sweep) {
  for (const celgc::SweepCell& c : sweep.cells) {
    std::cout << sweep.axis_name << " = " << c.axis_value << ": reached "
              << c.reached << '/' << c.seeds_total;
    if (c.has_mean()) {
      std::cout << ", mean iters " << celgc::format_double(c.iters_mean)
                << ", mean comm " << celgc::format_double(c.comm_mean)
                << ", ratio " << celgc::format_double(c.ratio_to_base);
    }
    if (c.diverged > 0) std::cout << ", diverged " << c.diverged;
    std::cout << '\n';
  }
}

int cmd_sweep_speedup(const std::string& config_path,
                      const std::vector<int>& n_list) {
  const celgc::ExperimentConfig cfg = celgc::parse_config_file(config_path);
  const celgc::SweepResult sweep = celgc::speedup_sweep(cfg, n_list);
  const std::string path = cfg.output + ".speedup.csv";
  celgc::sweep_csv(sweep).write_file(path);
  print_sweep(sweep);
  std::cout << "sweep csv: " << path << '\n';
  return kExitOk;
}

int cmd_sweep_comm(const std::string& config_path,
                   const std::vector<long>& i_list) {
  const celgc::ExperimentConfig cfg = celgc::parse_config_file(config_path);
  const celgc::SweepResult sweep = celgc::communication_sweep(cfg, i_list);
  const std::string path = cfg.output + ".comm.csv";
  celgc::sweep_csv(sweep).write_file(path);
  print_sweep(sweep);
  std::cout << "sweep csv: " << path << '\n';
  return kExitOk;
}

int cmd_plan(double eps, int n, double sigma, double l0, double l1,
             double delta, double cmin) {
  const celgc::TheoremOnePlan plan =
      celgc::theorem1_plan(eps, n, sigma, l0, l1, delta, cmin);
  std::cout << "A = " << celgc::format_double(plan.a_const) << '\n'
            << "B = " << celgc::format_double(plan.b_const) << '\n'
            << "I_max = " << plan.i_max << '\n'
            << "gamma_max = " << celgc::format_double(plan.gamma_max) << '\n'
            << "eta = " << celgc::format_double(plan.eta)
            << "  (gamma/eta = 5*sigma)\n"
            << "T = " << plan.total_iters << " (>= "
            << celgc::format_double(plan.total_iters_real) << ")\n"
            << "epsilon precondition: " << (plan.epsilon_ok ? "ok" : "VIOLATED")
            << '\n'
            << "sigma >= 1:           " << (plan.sigma_ok ? "ok" : "VIOLATED")
            << '\n'
            << "worker-count bound:   " << (plan.workers_ok ? "ok" : "VIOLATED")
            << '\n'
            << "feasible: " << (plan.feasible() ? "yes" : "no") << '\n';
  return kExitOk;
}

int cmd_verify_lemma1(double alpha, double mean_shift, long samples,
                      std::uint64_t seed, double sigma, double inner_std) {
  const celgc::NoiseModel noise =
      celgc::NoiseModel::truncated_gaussian(sigma, inner_std);
  const celgc::TruncationReport report = celgc::truncated_expectation_mc(
      noise, celgc::ParamVector{mean_shift}, alpha, samples, seed);
  std::cout << "alpha = " << alpha << ", mean shift = " << mean_shift
            << ", samples = " << samples << '\n'
            << "Pr(|g| <= alpha) = " << celgc::format_double(report.prob_inside)
            << '\n';
  for (const celgc::CoordinateFit& fit : report.fits) {
    if (fit.identifiable) {
      std::cout << "c[" << fit.coordinate
                << "] = " << celgc::format_double(fit.c) << " +- "
                << celgc::format_double(fit.std_error) << '\n';
    } else {
      std::cout << "c[" << fit.coordinate
                << "]: mean below noise floor (symmetric case)\n";
    }
  }
  if (!report.note.empty()) std::cout << "note: " << report.note << '\n';
  std::cout << "truncated-mean residual = "
            << celgc::format_double(report.residual_norm) << " (se "
            << celgc::format_double(report.residual_std_error) << ")\n"
            << (report.pass ? "PASS" : "FAIL") << '\n';
  return report.pass ? kExitOk : kExitVerifyFailed;
}

int cmd_verify_descent(const std::string& objective, int dim, long samples,
                       double c, std::uint64_t seed) {
  const celgc::ObjectiveSpec obj = celgc::make_objective(objective, dim);
  const celgc::ABConstants ab = celgc::ab_constants(c);
  const double max_step =
      obj.l1 > 0.0 ? c / obj.l1 : obj.test_ball_radius * 0.1;
  long descent_fail = 0, graddiff_fail = 0;
  for (long k = 0; k < samples; ++k) {
    celgc::CounterRng rng(seed, 1, static_cast<std::uint64_t>(k));
    const celgc::ParamVector x =
        celgc::sample_in_ball(obj.dim, obj.test_ball_radius * 0.9, rng);
    celgc::ParamVector step =
        celgc::sample_in_ball(obj.dim, max_step * 0.5, rng);
    const celgc::ParamVector x_next = celgc::add(x, step);
    if (!celgc::check_descent_inequality(obj, x, x_next, c)) ++descent_fail;
    const double dist = celgc::euclidean_norm(step);
    if (dist > 0.0) {
      const double est = celgc::local_smoothness_estimate(obj, x, x_next);
      const double bound =
          ab.a * obj.l0 +
          ab.b * obj.l1 * celgc::euclidean_norm(obj.gradient(x));
      if (est > bound + 1e-8) ++graddiff_fail;
    }
  }
  std::cout << "objective " << obj.name << " (dim " << obj.dim << "), "
            << samples << " pairs, c = " << c << '\n'
            << "descent-inequality violations:   " << descent_fail << '\n'
            << "gradient-difference violations:  " << graddiff_fail << '\n';
  const bool pass = descent_fail == 0 && graddiff_fail == 0;
  std::cout << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kExitOk : kExitVerifyFailed;
}

int cmd_certify(const std::string& objective, int dim, double radius,
                long samples, std::uint64_t seed) {
  const celgc::ObjectiveSpec obj = celgc::make_objective(objective, dim);
  const double r = radius > 0.0 ? radius : obj.test_ball_radius;
  const celgc::SmoothnessCertificate cert = celgc::certify_smoothness(
      obj, r, static_cast<int>(samples), seed);
  std::cout << "objective " << cert.objective << ": declared (L0, L1) = ("
            << cert.declared_l0 << ", " << cert.declared_l1 << "), radius "
            << cert.ball_radius << ", " << cert.samples << " samples\n"
            << "max observed (|hess| - L0)/|grad| = "
            << celgc::format_double(cert.max_ratio) << '\n';
  if (!cert.diagnostic.empty()) std::cout << cert.diagnostic << '\n';
  std::cout << (cert.pass ? "PASS" : "FAIL") << '\n';
  return cert.pass ? kExitOk : kExitVerifyFailed;
}

int cmd_report(const std::vector<std::string>& csv_paths,
               const std::string& svg_path, const std::string& column) {
  std::vector<celgc::Series> series;
  for (const std::string& path : csv_paths) {
    const celgc::CsvTable table = celgc::read_csv_file(path);
    const int t_col = table.column("t");
    const int y_col = table.column(column);
    const int id_col = table.column("run_id");
    if (t_col < 0 || y_col < 0) {
      throw celgc::ConfigError("'" + path + "' lacks column 't' or '" + column +
                               "'");
    }
    celgc::Series s;
    s.label = !table.rows.empty() && id_col >= 0 ? table.rows[0][id_col] : path;
    for (const auto& row : table.rows) {
      s.x.push_back(std::stod(row[t_col]));
      s.y.push_back(std::stod(row[y_col]));
    }
    if (s.x.empty()) {
      throw celgc::ConfigError("'" + path + "' has no data rows");
    }
    series.push_back(std::move(s));
  }
  celgc::emit_svg_lines(series, "t", column, "trace report", svg_path);
  std::cout << "wrote " << svg_path << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic simulator and verification suite for "
               "communication-efficient local gradient clipping"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run the experiment in a config file");
  run->add_option("config", config_path, "config file")->required();

  std::vector<int> n_list{1, 2, 4, 8};
  auto* sweep_speedup = app.add_subcommand(
      "sweep-speedup", "Iterations-to-target vs worker count (CELGC)");
  sweep_speedup->add_option("config", config_path, "config file")->required();
  sweep_speedup->add_option("--n-list", n_list, "worker counts (must include 1)")
      ->delimiter(',');

  std::vector<long> i_list{1, 4};
  auto* sweep_comm = app.add_subcommand(
      "sweep-comm", "Communication rounds vs sync interval (CELGC)");
  sweep_comm->add_option("config", config_path, "config file")->required();
  sweep_comm->add_option("--i-list", i_list, "sync intervals (must include 1)")
      ->delimiter(',');

  double eps = 0.1, sigma = 1.0, l0 = 12.0, l1 = 3.0, delta = 1.0, cmin = 1.0;
  int n_workers = 1;
  auto* plan = app.add_subcommand(
      "plan", "Hyperparameter plan from the convergence guarantee");
  plan->add_option("--eps", eps, "stationarity target")->required();
  plan->add_option("--n", n_workers, "worker count")->required();
  plan->add_option("--sigma", sigma, "a.s. noise bound")->required();
  plan->add_option("--l0", l0, "L0 smoothness constant")->required();
  plan->add_option("--l1", l1, "L1 smoothness constant")->required();
  plan->add_option("--delta", delta, "initial optimality gap bound")->required();
  plan->add_option("--cmin", cmin, "assumed truncation constant c_min");

  double alpha = 1.0, mean_shift = 0.5, vl_sigma = 1.0, vl_inner = 0.0;
  long samples = 1000000;
  std::uint64_t seed = 42;
  auto* lemma1 = app.add_subcommand(
      "verify-lemma1",
      "Monte-Carlo check of the truncated-expectation identity");
  lemma1->add_option("--alpha", alpha, "truncation radius");
  lemma1->add_option("--mean-shift", mean_shift, "mean of g");
  lemma1->add_option("--samples", samples, "Monte-Carlo samples");
  lemma1->add_option("--seed", seed, "rng seed");
  lemma1->add_option("--sigma", vl_sigma, "a.s. noise bound");
  lemma1->add_option("--inner-std", vl_inner, "pre-truncation std");

  std::string objective = "quartic";
  int dim = 4;
  double c_const = 0.5;
  long vd_samples = 1000;
  auto* descent = app.add_subcommand(
      "verify-descent",
      "Randomized check of the descent and gradient-difference inequalities");
  descent->add_option("--objective", objective, "quartic|quadratic|exp1d");
  descent->add_option("--dim", dim, "dimension");
  descent->add_option("--samples", vd_samples, "random pairs");
  descent->add_option("--c", c_const, "step-bound constant c");
  descent->add_option("--seed", seed, "rng seed");

  double radius = 0.0;
  long cs_samples = 10000;
  auto* certify = app.add_subcommand(
      "certify-smoothness", "Sampled validation of a declared (L0, L1)");
  certify->add_option("--objective", objective, "quartic|quadratic|exp1d")
      ->required();
  certify->add_option("--dim", dim, "dimension");
  certify->add_option("--radius", radius, "ball radius (0 = objective default)");
  certify->add_option("--samples", cs_samples, "sample count");
  certify->add_option("--seed", seed, "rng seed");

  std::vector<std::string> csv_paths;
  std::string svg_out, column = "grad_norm_avg_iterate";
  auto* report = app.add_subcommand("report", "Render trace CSVs as an SVG chart");
  report->add_option("csv", csv_paths, "trace csv files")->required();
  report->add_option("--svg", svg_out, "output svg path")->required();
  report->add_option("--column", column, "y column");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return cmd_run(config_path);
    if (*sweep_speedup) return cmd_sweep_speedup(config_path, n_list);
    if (*sweep_comm) return cmd_sweep_comm(config_path, i_list);
    if (*plan) return cmd_plan(eps, n_workers, sigma, l0, l1, delta, cmin);
    if (*lemma1) {
      return cmd_verify_lemma1(alpha, mean_shift, samples, seed, vl_sigma,
                               vl_inner);
    }
    if (*descent) {
      if (objective == "exp1d") dim = 1;
      return cmd_verify_descent(objective, dim, vd_samples, c_const, seed);
    }
    if (*certify) {
      if (objective == "exp1d") dim = 1;
      return cmd_certify(objective, dim, radius, cs_samples, seed);
    }
    if (*report) return cmd_report(csv_paths, svg_out, column);
  } catch (const celgc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
