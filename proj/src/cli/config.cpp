#include "spinekit/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace spinekit::cli {

namespace {

std::string at(const YAML::Node& node, const std::string& field) {
  const auto mark = node.Mark();
  if (mark.line >= 0) {
    return field + " (line " + std::to_string(mark.line + 1) + ")";
  }
  return field;
}

[[noreturn]] void fail(const YAML::Node& node, const std::string& field, const std::string& what) {
  throw ConfigError(at(node, field) + ": " + what);
}

template <class T>
T read(const YAML::Node& node, const std::string& field, const char* expected) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(node, field, std::string("expected ") + expected);
  }
}

double read_real(const YAML::Node& node, const std::string& field) {
  const double v = read<double>(node, field, "a number");
  if (!std::isfinite(v)) {
    fail(node, field, "must be finite");
  }
  return v;
}

std::size_t read_count(const YAML::Node& node, const std::string& field) {
  const auto s = read<std::string>(node, field, "a nonnegative integer");
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    fail(node, field, "expected a nonnegative integer");
  }
  return read<std::size_t>(node, field, "a nonnegative integer");
}

std::vector<double> read_reals(const YAML::Node& node, const std::string& field) {
  if (!node.IsSequence()) {
    fail(node, field, "expected a list of numbers");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    out.push_back(read_real(node[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<std::size_t> read_counts(const YAML::Node& node, const std::string& field) {
  if (!node.IsSequence()) {
    fail(node, field, "expected a list of integers");
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    out.push_back(read_count(node[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

void only_keys(const YAML::Node& node, const std::string& block, std::initializer_list<const char*> keys) {
  if (!node.IsMap()) {
    fail(node, block, "expected a mapping");
  }
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) {
      fail(kv.first, block + "." + key, "unknown field");
    }
  }
}

std::string choice(const YAML::Node& node, const std::string& field, std::initializer_list<const char*> options) {
  const auto v = read<std::string>(node, field, "a string");
  for (const char* o : options) {
    if (v == o) {
      return v;
    }
  }
  std::string list;
  for (const char* o : options) {
    list += (list.empty() ? "" : ", ") + std::string(o);
  }
  fail(node, field, "'" + v + "' is not one of " + list);
}

void parse_model(const YAML::Node& m, ModelConfig& out) {
  only_keys(m, "model", {"time", "motion", "zeta", "offspring", "rate", "origin"});
  if (m["time"]) {
    out.time = choice(m["time"], "model.time", {"continuous", "discrete"}) == "discrete" ? TimeMode::discrete
                                                                                        : TimeMode::continuous;
  }
  if (const auto n = m["motion"]) {
    only_keys(n, "model.motion", {"kind", "matrix"});
    if (n["kind"]) {
      out.motion = choice(n["kind"], "model.motion.kind", {"brownian", "chain"});
    }
    if (const auto mat = n["matrix"]) {
      if (!mat.IsSequence() || mat.size() == 0) {
        fail(mat, "model.motion.matrix", "expected a nonempty list of rows");
      }
      for (std::size_t i = 0; i < mat.size(); ++i) {
        out.matrix.push_back(read_reals(mat[i], "model.motion.matrix[" + std::to_string(i) + "]"));
      }
    }
  }
  if (const auto z = m["zeta"]) {
    only_keys(z, "model.zeta", {"kind", "lambda", "theta", "potential"});
    if (z["kind"]) {
      out.zeta = choice(z["kind"], "model.zeta.kind", {"one", "girsanov", "absorbed", "eigen_tilt"});
    }
    if (z["lambda"]) {
      out.lambda = read_real(z["lambda"], "model.zeta.lambda");
    }
    if (z["theta"]) {
      out.theta = read_real(z["theta"], "model.zeta.theta");
    }
    if (z["potential"]) {
      out.potential = read_reals(z["potential"], "model.zeta.potential");
    }
  }
  if (const auto o = m["offspring"]) {
    if (!o.IsMap() || o.size() == 0) {
      fail(o, "model.offspring", "expected a mapping from child count to probability");
    }
    out.offspring.clear();
    for (const auto& kv : o) {
      const auto a = read_count(kv.first, "model.offspring key");
      if (a > 64) {
        fail(kv.first, "model.offspring", "child counts above 64 are not supported");
      }
      out.offspring[static_cast<std::uint32_t>(a)] = read_real(kv.second, "model.offspring." + std::to_string(a));
    }
    try {
      (void)laws::OffspringLaw::from_map(out.offspring);
    } catch (const std::invalid_argument& e) {
      fail(o, "model.offspring", e.what());
    }
  }
  if (const auto r = m["rate"]) {
    only_keys(r, "model.rate", {"kind", "value", "threshold", "below", "above"});
    if (r["kind"]) {
      out.rate = choice(r["kind"], "model.rate.kind", {"constant", "step"});
    }
    if (r["value"]) {
      out.rate_value = read_real(r["value"], "model.rate.value");
    }
    if (r["threshold"]) {
      out.threshold = read_real(r["threshold"], "model.rate.threshold");
    }
    if (r["below"]) {
      out.below = read_real(r["below"], "model.rate.below");
    }
    if (r["above"]) {
      out.above = read_real(r["above"], "model.rate.above");
    }
    if (out.rate_value < 0.0 || out.below < 0.0 || out.above < 0.0) {
      fail(r, "model.rate", "rates must be nonnegative");
    }
  }
  if (m["origin"]) {
    out.origin = read_real(m["origin"], "model.origin");
  }
}

void parse_query(const YAML::Node& q, QueryConfig& out) {
  only_keys(q, "query", {"k", "horizon", "statistic", "distinct", "observation_times"});
  if (q["k"]) {
    out.k = read_count(q["k"], "query.k");
    if (out.k == 0) {
      fail(q["k"], "query.k", "must be at least 1");
    }
  }
  if (q["horizon"]) {
    out.horizon = read_real(q["horizon"], "query.horizon");
    if (out.horizon < 0.0) {
      fail(q["horizon"], "query.horizon", "must be nonnegative");
    }
  }
  if (const auto s = q["statistic"]) {
    only_keys(s, "query.statistic", {"kind", "x", "marks", "states"});
    if (s["kind"]) {
      out.statistic = choice(s["kind"], "query.statistic.kind", {"one", "above", "state_indicators"});
    }
    if (s["x"]) {
      out.x = read_real(s["x"], "query.statistic.x");
    }
    if (s["marks"]) {
      out.every_mark = choice(s["marks"], "query.statistic.marks", {"first", "all"}) == "all";
    }
    if (s["states"]) {
      out.states = read_counts(s["states"], "query.statistic.states");
    }
  }
  if (q["distinct"]) {
    out.distinct = read<bool>(q["distinct"], "query.distinct", "true or false");
  }
  if (q["observation_times"]) {
    out.observation_times = read_reals(q["observation_times"], "query.observation_times");
  }
}

void parse_run(const YAML::Node& r, RunConfig& out) {
  only_keys(r, "run", {"replicates", "seed", "workers", "population_cap", "tuple_cap", "quadrature_step"});
  if (r["replicates"]) {
    out.replicates = read_count(r["replicates"], "run.replicates");
    if (out.replicates < 2) {
      fail(r["replicates"], "run.replicates", "must be at least 2");
    }
  }
  if (r["seed"]) {
    out.seed = read<std::uint64_t>(r["seed"], "run.seed", "an unsigned 64-bit integer");
  }
  if (r["workers"]) {
    out.workers = static_cast<unsigned>(read_count(r["workers"], "run.workers"));
    if (out.workers == 0) {
      fail(r["workers"], "run.workers", "must be at least 1");
    }
  }
  if (r["population_cap"]) {
    out.population_cap = read_count(r["population_cap"], "run.population_cap");
  }
  if (r["tuple_cap"]) {
    out.tuple_cap = read_count(r["tuple_cap"], "run.tuple_cap");
  }
  if (r["quadrature_step"]) {
    out.quadrature_step = read_real(r["quadrature_step"], "run.quadrature_step");
  }
}

void parse_output(const YAML::Node& o, OutputConfig& out) {
  only_keys(o, "output", {"dir", "formats", "name"});
  if (o["dir"]) {
    out.dir = read<std::string>(o["dir"], "output.dir", "a path");
  }
  if (const auto f = o["formats"]) {
    if (!f.IsSequence() || f.size() == 0) {
      fail(f, "output.formats", "expected a nonempty list");
    }
    out.formats.clear();
    for (std::size_t i = 0; i < f.size(); ++i) {
      out.formats.push_back(choice(f[i], "output.formats", {"json", "csv"}));
    }
  }
  if (o["name"]) {
    out.name = read<std::string>(o["name"], "output.name", "a file stem");
  }
}

}  // namespace

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h = (h ^ c) * 0x100000001b3ULL;
  }
  return h;
}

ExperimentConfig default_config() {
  ExperimentConfig c;
  c.source = "<built-in>";
  c.hash = fnv1a("");
  return c;
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  ExperimentConfig c;
  c.source = source;
  c.hash = fnv1a(text);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(source + ": " + e.what());
  }
  if (root.IsNull()) {
    return c;
  }
  only_keys(root, "config", {"model", "query", "run", "output", "bounds", "grid"});
  if (root["model"]) {
    parse_model(root["model"], c.model);
  }
  if (root["query"]) {
    parse_query(root["query"], c.query);
  }
  if (root["run"]) {
    parse_run(root["run"], c.run);
  }
  if (root["output"]) {
    parse_output(root["output"], c.output);
  }
  if (const auto b = root["bounds"]) {
    only_keys(b, "bounds", {"x", "t"});
    if (b["x"]) {
      c.bounds.x = read_reals(b["x"], "bounds.x");
    }
    if (b["t"]) {
      c.bounds.t = read_reals(b["t"], "bounds.t");
      for (const double t : c.bounds.t) {
        if (!(t > 0.0)) {
          fail(b["t"], "bounds.t", "times must be positive");
        }
      }
    }
  }
  if (const auto g = root["grid"]) {
    only_keys(g, "grid", {"k", "generations"});
    auto narrow = [&](const YAML::Node& n, const std::string& field) {
      std::vector<std::uint32_t> out;
      for (const auto v : read_counts(n, field)) {
        if (v == 0 || v > 8) {
          fail(n, field, "entries must lie in 1..8");
        }
        out.push_back(static_cast<std::uint32_t>(v));
      }
      return out;
    };
    if (g["k"]) {
      c.grid.k = narrow(g["k"], "grid.k");
    }
    if (g["generations"]) {
      c.grid.generations = narrow(g["generations"], "grid.generations");
    }
  }

  if (c.query.statistic == "state_indicators" && c.query.states.size() != c.query.k) {
    fail(root["query"], "query.statistic.states", "needs one state per mark");
  }
  if (c.model.time == TimeMode::discrete) {
    if (c.query.horizon < 1.0 || c.query.horizon != std::floor(c.query.horizon)) {
      fail(root["query"], "query.horizon", "discrete time needs a positive whole number of generations");
    }
    if (c.model.motion != "chain") {
      fail(root["model"], "model.motion.kind", "discrete time needs a chain");
    }
  }
  try {
    if (c.model.time == TimeMode::discrete) {
      (void)build_discrete(c);
    } else {
      (void)build_continuous(c);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail(root["model"], "model", e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError(path + ": cannot open");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path);
}

namespace {

laws::BranchRate build_rate(const ModelConfig& m) {
  if (m.rate == "step") {
    return laws::BranchRate::step(m.threshold, m.below, m.above);
  }
  return laws::BranchRate::constant(m.rate_value);
}

laws::FiniteChain build_chain(const ModelConfig& m, laws::ChainClock clock) {
  if (m.matrix.empty()) {
    throw ConfigError("model.motion.matrix: a chain needs a matrix");
  }
  if (m.zeta != "one" && m.zeta != "eigen_tilt") {
    throw ConfigError("model.zeta.kind: chains support one or eigen_tilt");
  }
  return laws::FiniteChain(m.matrix, clock, m.zeta == "eigen_tilt" ? m.theta : 0.0, m.potential);
}

}  // namespace

sim::ContinuousModel build_continuous(const ExperimentConfig& config) {
  const auto& m = config.model;
  laws::MotionPtr motion;
  if (m.motion == "chain") {
    motion = laws::chain_motion(build_chain(m, laws::ChainClock::continuous));
  } else if (m.zeta == "one") {
    motion = laws::brownian();
  } else if (m.zeta == "girsanov") {
    motion = laws::brownian_girsanov(m.lambda);
  } else if (m.zeta == "absorbed") {
    motion = laws::brownian_absorbed();
  } else {
    throw ConfigError("model.zeta.kind: eigen_tilt needs a chain motion");
  }
  motion->validate_origin(m.origin);
  sim::SimOptions opt;
  opt.population_cap = config.run.population_cap;
  opt.quadrature_step = config.run.quadrature_step;
  opt.observation_times = config.query.observation_times;
  return sim::ContinuousModel{motion, build_rate(m), laws::OffspringLaw::from_map(m.offspring), m.origin, opt};
}

discrete::DiscreteModel build_discrete(const ExperimentConfig& config) {
  const auto& m = config.model;
  const double x = m.origin;
  if (x < 0.0 || x != std::floor(x)) {
    throw ConfigError("model.origin: discrete time starts at a state index");
  }
  discrete::DiscreteModel d{build_chain(m, laws::ChainClock::discrete), laws::OffspringLaw::from_map(m.offspring),
                            static_cast<std::uint32_t>(config.query.horizon), static_cast<std::uint32_t>(config.query.k),
                            static_cast<std::size_t>(x), config.run.population_cap};
  d.validate();
  return d;
}

estimators::Statistic build_statistic(const ExperimentConfig& config) {
  const auto& q = config.query;
  if (q.statistic == "above") {
    return estimators::Statistic::above(q.k, q.x, q.every_mark);
  }
  if (q.statistic == "state_indicators") {
    return estimators::Statistic::state_indicators(q.states);
  }
  return estimators::Statistic::one(q.k);
}

}  // namespace spinekit::cli
