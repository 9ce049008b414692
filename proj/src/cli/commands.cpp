#include "spinekit/cli/commands.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "spinekit/cli/config.hpp"
#include "spinekit/cli/verify.hpp"
#include "spinekit/core/tree_io.hpp"
#include "spinekit/estimators/closed_forms.hpp"
#include "spinekit/estimators/estimators.hpp"
#include "spinekit/laws/motion.hpp"

namespace spinekit::cli {

namespace {

using Json = nlohmann::ordered_json;
using core::format_real;

constexpr const char* kSchema = "spinekit.report/1";

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

Json interval(const Interval& i) { return Json::array({i.lower, i.upper}); }

Json report_json(const EstimateReport& r, bool timing) {
  Json j;
  j["estimate"] = r.estimate;
  j["std_error"] = r.std_error;
  j["ci95"] = interval(r.ci95);
  j["ci99"] = interval(r.ci99);
  j["replicates"] = r.replicates;
  j["seed"] = r.seed;
  if (timing) {
    j["wall_seconds"] = r.wall_seconds;
  }
  return j;
}

struct Session {
  std::string command;
  CommandOptions options;
  ExperimentConfig config;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::filesystem::path dir;
  bool json = true;
  bool csv = true;
  std::string stem;
  std::ostream& log;

  Json header(const std::string& status) const {
    Json j;
    j["schema"] = kSchema;
    j["version"] = SPINEKIT_VERSION;
    j["command"] = command;
    j["config"] = {{"source", config.source}, {"hash", hex(config.hash)}};
    j["seed"] = seed;
    j["status"] = status;
    return j;
  }

  Json model_json() const {
    const auto& m = config.model;
    Json j;
    j["time"] = m.time == TimeMode::discrete ? "discrete" : "continuous";
    j["motion"] = m.motion;
    j["zeta"] = m.zeta;
    if (m.zeta == "girsanov") {
      j["lambda"] = m.lambda;
    }
    if (m.zeta == "eigen_tilt") {
      j["theta"] = m.theta;
    }
    j["offspring"] = laws::OffspringLaw::from_map(m.offspring).describe();
    j["rate"] = m.rate == "step" ? "step(" + format_real(m.threshold) + "," + format_real(m.below) + "," +
                                       format_real(m.above) + ")"
                                 : "constant(" + format_real(m.rate_value) + ")";
    j["origin"] = m.origin;
    return j;
  }

  void write(const std::string& suffix, const std::string& text) const {
    std::filesystem::create_directories(dir);
    const auto path = dir / (stem + suffix);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      throw std::runtime_error("cannot write " + path.string());
    }
    out << text;
    log << "wrote " << path.string() << "\n";
  }

  void emit(const Json& body, const std::string& csv_text) const {
    if (json) {
      write(".json", body.dump(2) + "\n");
    }
    if (csv) {
      write(".csv", csv_text);
    }
  }
};

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (const char c : s) {
    out += c == '"' ? std::string("\"\"") : std::string(1, c);
  }
  return out + "\"";
}

// ---- estimate / direct -------------------------------------------------

int estimate_command(Session& s, bool spine) {
  const auto& q = s.config.query;
  const auto y = build_statistic(s.config);
  estimators::RunOptions run;
  run.replicates = s.config.run.replicates;
  run.seed = s.seed;
  run.workers = s.workers;
  run.distinct_tuples = q.distinct;
  run.tuple_cap = s.config.run.tuple_cap;
  run.convention = s.options.unsound_per_edge_m ? discrete::MomentConvention::per_edge
                                                : discrete::MomentConvention::per_node;
  const bool discrete_time = s.config.model.time == TimeMode::discrete;
  const std::string estimator = spine ? "spine" : "direct";

  Json body = s.header("ok");
  body["model"] = s.model_json();
  body["query"] = {{"k", q.k},
                   {"horizon", q.horizon},
                   {"statistic", y.description()},
                   {"distinct", q.distinct}};
  body["estimator"] = estimator;
  if (s.options.unsound_wrong_rate || s.options.unsound_per_edge_m) {
    body["unsound"] = {{"wrong_rate", s.options.unsound_wrong_rate}, {"per_edge_m", s.options.unsound_per_edge_m}};
  }

  EstimateReport r;
  try {
    if (discrete_time) {
      const auto model = build_discrete(s.config);
      r = spine ? estimators::estimate_spine(model, y, run) : estimators::estimate_direct(model, y, run);
    } else {
      auto model = build_continuous(s.config);
      model.options.unsound_wrong_rate = s.options.unsound_wrong_rate;
      r = spine ? estimators::estimate_spine(model, y, q.horizon, run)
                : estimators::estimate_direct(model, y, q.horizon, run);
    }
  } catch (const ExplosionError& e) {
    Json fail = s.header("error");
    fail["error"] = e.what();
    fail["partial"] = {{"particles", e.particles()}, {"time_reached", e.time_reached()}};
    s.emit(fail, "status,error\nerror," + csv_escape(e.what()) + "\n");
    s.log << "error: " << e.what() << "\n";
    return kExitSimulation;
  } catch (const BudgetExceededError& e) {
    Json fail = s.header("error");
    fail["error"] = e.what();
    s.emit(fail, "status,error\nerror," + csv_escape(e.what()) + "\n");
    s.log << "error: " << e.what() << "\n";
    return kExitSimulation;
  }

  std::optional<double> exact;
  if (!discrete_time && closed_forms_apply(s.config) && !q.distinct && q.k <= 2 &&
      (q.statistic == "one" || q.statistic == "above")) {
    using estimators::ScalarFunction;
    const auto first = q.statistic == "above" ? ScalarFunction::above(q.x) : ScalarFunction::one();
    const auto second = q.statistic == "above" && q.every_mark ? ScalarFunction::above(q.x) : ScalarFunction::one();
    exact = q.k == 1 ? estimators::many_to_one_closed_form(first, q.horizon)
                     : estimators::many_to_two_closed_form(first, second, q.horizon);
  }
  body["result"] = report_json(r, s.options.timing);
  if (exact) {
    body["closed_form"] = {{"value", *exact}, {"covered99", r.ci99.contains(*exact)}};
  }

  std::ostringstream csv;
  csv << "command,time,k,horizon,statistic,estimator,estimate,std_error,ci95_lower,ci95_upper,ci99_lower,"
         "ci99_upper,replicates,seed,config_hash,closed_form\n";
  csv << s.command << ',' << (discrete_time ? "discrete" : "continuous") << ',' << q.k << ','
      << format_real(q.horizon) << ',' << csv_escape(y.description()) << ',' << estimator << ','
      << format_real(r.estimate) << ',' << format_real(r.std_error) << ',' << format_real(r.ci95.lower) << ','
      << format_real(r.ci95.upper) << ',' << format_real(r.ci99.lower) << ',' << format_real(r.ci99.upper) << ','
      << r.replicates << ',' << s.seed << ',' << hex(s.config.hash) << ','
      << (exact ? format_real(*exact) : std::string()) << "\n";
  s.emit(body, csv.str());

  s.log << estimator << " estimate " << format_real(r.estimate) << " (se " << format_real(r.std_error)
        << ", 99% CI [" << format_real(r.ci99.lower) << ", " << format_real(r.ci99.upper) << "])";
  if (exact) {
    s.log << "; closed form " << format_real(*exact);
  }
  s.log << "\n";
  return kExitOk;
}

// ---- verify-discrete ---------------------------------------------------

int verify_discrete_command(Session& s) {
  const auto convention =
      s.options.unsound_per_edge_m ? discrete::MomentConvention::per_edge : discrete::MomentConvention::per_node;
  const auto cases = run_discrete_grid(s.config.grid, convention, s.workers);
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0;
  std::ostringstream csv;
  csv << "law,k,generations,chain,zeta,statistic,lhs,rhs,abs_diff,tolerance,status\n";
  Json rows = Json::array();
  for (const auto& c : cases) {
    passed += c.status == CaseStatus::pass;
    failed += c.status == CaseStatus::fail;
    skipped += c.status == CaseStatus::skipped;
    csv << csv_escape(c.law) << ',' << c.k << ',' << c.generations << ',' << c.chain << ',' << c.zeta << ','
        << csv_escape(c.statistic) << ',' << format_real(c.lhs) << ',' << format_real(c.rhs) << ','
        << format_real(c.abs_diff) << ',' << format_real(c.tolerance) << ',' << to_string(c.status) << "\n";
    if (c.status != CaseStatus::pass) {
      rows.push_back({{"law", c.law},
                      {"k", c.k},
                      {"generations", c.generations},
                      {"chain", c.chain},
                      {"zeta", c.zeta},
                      {"statistic", c.statistic},
                      {"lhs", c.lhs},
                      {"rhs", c.rhs},
                      {"status", to_string(c.status)},
                      {"note", c.note}});
    }
  }
  Json body = s.header(failed == 0 ? "ok" : "failed");
  body["convention"] = convention == discrete::MomentConvention::per_node ? "per_node" : "per_edge";
  body["cases"] = cases.size();
  body["passed"] = passed;
  body["failed"] = failed;
  body["skipped"] = skipped;
  body["not_passed"] = rows;
  s.emit(body, csv.str());
  s.log << "discrete oracle grid: " << passed << " passed, " << failed << " failed, " << skipped << " skipped of "
        << cases.size() << "\n";
  return failed == 0 ? kExitOk : kExitCheckFailed;
}

// ---- verify-ct ---------------------------------------------------------

int verify_ct_command(Session& s) {
  CtSuiteOptions opt;
  opt.seed = s.seed;
  opt.workers = s.workers;
  opt.replicates = s.config.run.replicates;
  opt.unsound_wrong_rate = s.options.unsound_wrong_rate;
  const auto checks = run_ct_suite(s.config, opt);
  bool all = true;
  std::ostringstream csv;
  csv << "check,value,target,lower,upper,pass\n";
  Json rows = Json::array();
  for (const auto& c : checks) {
    all = all && c.pass;
    csv << c.name << ',' << format_real(c.value) << ',' << format_real(c.target) << ',' << format_real(c.lower)
        << ',' << format_real(c.upper) << ',' << (c.pass ? "pass" : "fail") << "\n";
    rows.push_back({{"check", c.name},
                    {"value", c.value},
                    {"target", c.target},
                    {"lower", c.lower},
                    {"upper", c.upper},
                    {"pass", c.pass},
                    {"detail", c.detail}});
    s.log << (c.pass ? "PASS " : "FAIL ") << c.name << " value=" << format_real(c.value)
          << " target=" << format_real(c.target) << "\n";
  }
  Json body = s.header(all ? "ok" : "failed");
  body["model"] = s.model_json();
  body["horizon"] = s.config.query.horizon;
  if (s.options.unsound_wrong_rate) {
    body["unsound"] = {{"wrong_rate", true}};
  }
  body["checks"] = rows;
  s.emit(body, csv.str());
  return all ? kExitOk : kExitCheckFailed;
}

// ---- bounds ------------------------------------------------------------

int bounds_command(Session& s) {
  if (!closed_forms_apply(s.config)) {
    throw ConfigError("bounds: the closed-form bounds need Brownian motion, binary branching, R = 1 and origin 0");
  }
  const auto model = build_continuous(s.config);
  std::ostringstream csv;
  csv << "x,t,lower,estimate,std_error,upper,upper_uncapped,bracketed\n";
  Json rows = Json::array();
  bool all = true;
  std::uint64_t index = 0;
  for (const double t : s.config.bounds.t) {
    for (const double x : s.config.bounds.x) {
      estimators::RunOptions run;
      run.replicates = s.config.run.replicates;
      run.seed = s.seed + 0x9e3779b97f4a7c15ULL * ++index;
      run.workers = s.workers;
      const auto mc = estimators::exceedance_probability(model, x, t, run);
      const double lower = estimators::tail_lower_bound(x, t);
      const double upper_raw = estimators::tail_upper_bound(x, t);
      const double upper = std::min(1.0, upper_raw);
      const double slack = 3.0 * mc.std_error;
      const bool ok = lower - slack <= mc.estimate && mc.estimate <= upper + slack;
      all = all && ok;
      csv << format_real(x) << ',' << format_real(t) << ',' << format_real(lower) << ',' << format_real(mc.estimate)
          << ',' << format_real(mc.std_error) << ',' << format_real(upper) << ',' << format_real(upper_raw) << ','
          << (ok ? "yes" : "no") << "\n";
      rows.push_back({{"x", x},
                      {"t", t},
                      {"lower", lower},
                      {"estimate", report_json(mc, s.options.timing)},
                      {"upper", upper},
                      {"upper_uncapped", upper_raw},
                      {"bracketed", ok}});
      s.log << "x=" << format_real(x) << " t=" << format_real(t) << ": " << format_real(lower) << " <= "
            << format_real(mc.estimate) << " <= " << format_real(upper) << (ok ? "" : "  (outside)") << "\n";
    }
  }
  Json body = s.header("ok");
  body["rows"] = rows;
  body["all_bracketed"] = all;
  s.emit(body, csv.str());
  return kExitOk;
}

// ---- martingale-check --------------------------------------------------

int martingale_command(Session& s) {
  const auto model = build_continuous(s.config);
  const auto check = laws::martingale_check(*model.motion, model.origin, s.config.query.horizon,
                                            s.config.run.replicates, s.seed, s.workers);
  Json body = s.header(check.pass ? "ok" : "failed");
  body["motion"] = model.motion->name();
  body["x"] = model.origin;
  body["t"] = s.config.query.horizon;
  body["result"] = report_json(check.report, s.options.timing);
  body["pass"] = check.pass;
  std::ostringstream csv;
  csv << "motion,x,t,estimate,std_error,ci99_lower,ci99_upper,replicates,seed,pass\n"
      << csv_escape(model.motion->name()) << ',' << format_real(model.origin) << ','
      << format_real(s.config.query.horizon) << ',' << format_real(check.report.estimate) << ','
      << format_real(check.report.std_error) << ',' << format_real(check.report.ci99.lower) << ','
      << format_real(check.report.ci99.upper) << ',' << check.report.replicates << ',' << s.seed << ','
      << (check.pass ? "pass" : "fail") << "\n";
  s.emit(body, csv.str());
  s.log << "mean zeta " << format_real(check.report.estimate) << " 99% CI [" << format_real(check.report.ci99.lower)
        << ", " << format_real(check.report.ci99.upper) << "] " << (check.pass ? "contains 1" : "misses 1") << "\n";
  return check.pass ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run_command(const std::string& command, const CommandOptions& options, std::ostream& log) {
  try {
    ExperimentConfig config = options.config_path ? load_config(*options.config_path) : default_config();
    Session s{command, options, config, 0, 1, {}, true, true, {}, log};
    if (options.seed) {
      s.seed = *options.seed;
    } else if (config.run.seed) {
      s.seed = *config.run.seed;
    } else {
      throw ConfigError("run.seed: a seed is required (set it in the config or pass --seed)");
    }
    s.workers = options.workers.value_or(config.run.workers);
    if (s.workers == 0) {
      throw ConfigError("--workers must be at least 1");
    }
    if (options.out_dir) {
      s.dir = *options.out_dir;
    } else if (const char* env = std::getenv(kOutDirVariable); env != nullptr && *env != '\0') {
      s.dir = env;
    } else {
      s.dir = config.output.dir;
    }
    if (options.format) {
      s.json = *options.format == "json";
      s.csv = *options.format == "csv";
    } else {
      s.json = std::find(config.output.formats.begin(), config.output.formats.end(), "json") !=
               config.output.formats.end();
      s.csv = std::find(config.output.formats.begin(), config.output.formats.end(), "csv") !=
              config.output.formats.end();
    }
    s.stem = config.output.name.empty() ? command : config.output.name;

    if (command == "estimate") {
      return estimate_command(s, true);
    }
    if (command == "direct") {
      return estimate_command(s, false);
    }
    if (command == "verify-discrete") {
      return verify_discrete_command(s);
    }
    if (command == "verify-ct") {
      if (config.model.time == TimeMode::discrete) {
        throw ConfigError("verify-ct needs a continuous-time model");
      }
      return verify_ct_command(s);
    }
    if (command == "bounds") {
      return bounds_command(s);
    }
    if (command == "martingale-check") {
      if (config.model.time == TimeMode::discrete) {
        throw ConfigError("martingale-check needs a continuous-time model");
      }
      return martingale_command(s);
    }
    throw ConfigError("unknown command " + command);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitSimulation;
  }
}

int run_cli(int argc, char** argv) {
  CLI::App app{"spinekit: many-to-few spine simulation and moment verification"};
  app.set_version_flag("--version", std::string(SPINEKIT_VERSION));
  app.require_subcommand(1);
  CommandOptions options;
  std::string format;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"estimate", "spine (Q^k) estimate of the configured k-fold sum"},
      {"direct", "direct Monte Carlo estimate of the configured k-fold sum"},
      {"verify-discrete", "exact discrete-time oracle grid"},
      {"verify-ct", "continuous-time verification suite"},
      {"bounds", "tail-probability bounds against Monte Carlo"},
      {"martingale-check", "unit mean of the single-particle martingale"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", options.config_path, "experiment file (YAML)")->check(CLI::ExistingFile);
    sub->add_option("--seed", options.seed, "master seed (overrides run.seed)");
    sub->add_option("--workers", options.workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", options.out_dir, "output directory");
    sub->add_option("--format", format, "write only csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--timing", options.timing, "include wall-clock times in reports");
    sub->add_flag("--unsound-wrong-rate", options.unsound_wrong_rate,
                  "diagnostic: spine carriers branch at rate R instead of m^j R");
    sub->add_flag("--unsound-per-edge-m", options.unsound_per_edge_m,
                  "diagnostic: moment factor per skeleton edge in discrete time");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (!format.empty()) {
    options.format = format;
  }
  for (const auto* sub : app.get_subcommands()) {
    return run_command(sub->get_name(), options, std::cout);
  }
  return kExitUsage;
}

}  // namespace spinekit::cli
