#include "celgc/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "celgc/theory.hpp"

namespace celgc {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& s, int line) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) fail(line, "trailing characters in number '" + s + "'");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    fail(line, "expected a number, got '" + s + "'");
  }
}

long parse_long(const std::string& s, int line) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    fail(line, "expected an integer, got '" + s + "'");
  }
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

ParamVector X0Spec::build(int dim) const {
  if (explicit_vector) {
    if (static_cast<int>(values.size()) != dim) {
      throw ConfigError("x0 has " + std::to_string(values.size()) +
                        " entries but dim is " + std::to_string(dim));
    }
    return values;
  }
  if (axis < 1 || axis > dim) {
    throw ConfigError("x0 axis " + std::to_string(axis) +
                      " out of range for dim " + std::to_string(dim));
  }
  ParamVector x(dim, 0.0);
  x[axis - 1] = radius;
  return x;
}

ObjectiveSpec ExperimentConfig::build_objective() const {
  return make_objective(objective_name, dim, exp_scale);
}

NoiseModel ExperimentConfig::build_noise() const {
  return NoiseModel::from_name(noise_name, sigma, inner_std);
}

ParamVector ExperimentConfig::build_x0() const { return x0.build(dim); }

HyperParams ExperimentConfig::resolve_hyperparams() const {
  HyperParams hp;
  hp.sync_interval = sync_interval;
  hp.total_iters = total_iters;
  hp.workers = workers;
  hp.participation = participation == 0 ? workers : participation;

  if (mode == HyperParamMode::kManual) {
    hp.eta = eta;
    hp.gamma = gamma;
    return hp;
  }

  if (!(sigma > 0.0)) {
    throw ConfigError("desk/theorem mode needs sigma > 0 to derive (eta, gamma)");
  }
  const ObjectiveSpec obj = build_objective();
  const double delta = obj.value(build_x0()) - obj.f_star;
  if (!(delta > 0.0)) {
    throw ConfigError("desk/theorem mode: x0 is already optimal (delta = 0)");
  }
  const double plan_eps = plan_epsilon > 0.0 ? plan_epsilon : epsilon_target;
  const TheoremOnePlan plan =
      theorem1_plan(plan_eps, workers, sigma, obj.l0, obj.l1, delta, c_min);
  const double scale = mode == HyperParamMode::kDesk ? desk_scale : 1.0;
  hp.gamma = plan.gamma_max * scale;
  hp.eta = hp.gamma / (5.0 * sigma);
  if (obj.l1 > 0.0) {
    const double lhs = 2.0 * hp.gamma * static_cast<double>(sync_interval);
    const double rhs = 0.5 / obj.l1;
    if (lhs > rhs) {
      throw ConfigError(
          "desk scaling violates 2*gamma*I <= 1/(2*L1): " + std::to_string(lhs) +
          " > " + std::to_string(rhs) + "; lower desk_scale or sync_interval");
    }
  }
  return hp;
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  bool has_dim = false, has_x0 = false;

  std::istringstream stream(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(line_no, "empty key");
    if (value.empty()) fail(line_no, "empty value for key '" + key + "'");
    if (!seen.insert(key).second) fail(line_no, "duplicate key '" + key + "'");

    if (key == "objective") {
      cfg.objective_name = value;
    } else if (key == "dim") {
      cfg.dim = static_cast<int>(parse_long(value, line_no));
      has_dim = true;
    } else if (key == "exp_scale") {
      cfg.exp_scale = parse_double(value, line_no);
    } else if (key == "noise") {
      cfg.noise_name = value;
    } else if (key == "sigma") {
      cfg.sigma = parse_double(value, line_no);
    } else if (key == "inner_std") {
      cfg.inner_std = parse_double(value, line_no);
    } else if (key == "algorithm") {
      cfg.algorithm = value;
    } else if (key == "mode") {
      if (value == "manual") {
        cfg.mode = HyperParamMode::kManual;
      } else if (value == "desk") {
        cfg.mode = HyperParamMode::kDesk;
      } else if (value == "theorem") {
        cfg.mode = HyperParamMode::kTheorem;
      } else {
        fail(line_no, "mode must be manual, desk, or theorem");
      }
    } else if (key == "eta") {
      cfg.eta = parse_double(value, line_no);
    } else if (key == "gamma") {
      cfg.gamma = parse_double(value, line_no);
    } else if (key == "desk_scale") {
      cfg.desk_scale = parse_double(value, line_no);
    } else if (key == "c_min") {
      cfg.c_min = parse_double(value, line_no);
    } else if (key == "plan_epsilon") {
      cfg.plan_epsilon = parse_double(value, line_no);
    } else if (key == "sync_interval") {
      cfg.sync_interval = parse_long(value, line_no);
    } else if (key == "iters") {
      cfg.total_iters = parse_long(value, line_no);
    } else if (key == "workers") {
      cfg.workers = static_cast<int>(parse_long(value, line_no));
    } else if (key == "participation") {
      cfg.participation = static_cast<int>(parse_long(value, line_no));
    } else if (key == "x0") {
      has_x0 = true;
      const auto toks = split_ws(value);
      if (!toks.empty() && toks[0] == "radius") {
        // "radius <r> [axis <k>]"
        if (toks.size() != 2 && toks.size() != 4) {
          fail(line_no, "x0 syntax: 'radius <r> [axis <k>]' or a list of numbers");
        }
        cfg.x0.explicit_vector = false;
        cfg.x0.radius = parse_double(toks[1], line_no);
        if (toks.size() == 4) {
          if (toks[2] != "axis") fail(line_no, "expected 'axis', got '" + toks[2] + "'");
          cfg.x0.axis = static_cast<int>(parse_long(toks[3], line_no));
        }
      } else {
        cfg.x0.explicit_vector = true;
        for (const auto& t : toks) {
          cfg.x0.values.push_back(parse_double(t, line_no));
        }
        if (cfg.x0.values.empty()) fail(line_no, "x0 vector is empty");
      }
    } else if (key == "seeds") {
      for (const auto& t : split_ws(value)) {
        const long s = parse_long(t, line_no);
        if (s < 0) fail(line_no, "seeds must be non-negative");
        cfg.seeds.push_back(static_cast<std::uint64_t>(s));
      }
    } else if (key == "record_every") {
      cfg.record_every = parse_long(value, line_no);
    } else if (key == "epsilon_target") {
      cfg.epsilon_target = parse_double(value, line_no);
    } else if (key == "output") {
      cfg.output = value;
    } else {
      fail(line_no, "unknown key '" + key + "'");
    }
  }

  // Cross-field validation (independent of line numbers).
  if (cfg.objective_name.empty()) throw ConfigError("config: missing 'objective'");
  if (cfg.objective_name == "exp1d") {
    if (!has_dim) cfg.dim = 1;
  } else if (!has_dim) {
    throw ConfigError("config: missing 'dim'");
  }
  if (cfg.noise_name.empty()) throw ConfigError("config: missing 'noise'");
  if (cfg.algorithm.empty()) throw ConfigError("config: missing 'algorithm'");
  if (cfg.seeds.empty()) throw ConfigError("config: missing 'seeds'");
  if (!(cfg.epsilon_target > 0.0)) {
    throw ConfigError("config: 'epsilon_target' must be > 0");
  }
  if (cfg.output.empty()) throw ConfigError("config: missing 'output'");
  if (cfg.record_every < 1) throw ConfigError("config: record_every must be >= 1");
  if (!has_x0) {
    cfg.x0.explicit_vector = false;
    cfg.x0.axis = 1;
    if (cfg.objective_name == "quartic") {
      cfg.x0.radius = 5.0;
    } else if (cfg.objective_name == "quadratic") {
      cfg.x0.radius = 1.0;
    } else {
      cfg.x0.radius = 3.0;
    }
  }
  if (cfg.mode == HyperParamMode::kManual && cfg.algorithm != "sgd") {
    if (!(cfg.eta > 0.0) || !(cfg.gamma > 0.0)) {
      throw ConfigError("config: manual mode requires eta > 0 and gamma > 0");
    }
  }

  // Fail early on anything the resolvers would reject.
  cfg.build_objective();
  cfg.build_noise();
  cfg.build_x0();
  cfg.resolve_hyperparams().validate();
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace celgc
