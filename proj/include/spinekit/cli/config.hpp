#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spinekit/core/errors.hpp"
#include "spinekit/estimators/statistic.hpp"
#include "spinekit/laws/finite_chain.hpp"
#include "spinekit/sim_ct/simulate.hpp"
#include "spinekit/sim_dt/discrete.hpp"

namespace spinekit::cli {

/// Invalid experiment file. The message names the field and, when known, the line.
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class TimeMode { continuous, discrete };

struct ModelConfig {
  TimeMode time = TimeMode::continuous;
  std::string motion = "brownian";  // brownian | chain
  laws::Matrix matrix;              // chain: rate matrix or transition matrix
  std::string zeta = "one";         // one | girsanov | absorbed | eigen_tilt
  double lambda = 1.0;
  double theta = 0.0;
  std::vector<double> potential;
  std::map<std::uint32_t, double> offspring{{2, 1.0}};
  std::string rate = "constant";  // constant | step
  double rate_value = 1.0;
  double threshold = 0.0;
  double below = 0.0;
  double above = 0.0;
  double origin = 0.0;
};

struct QueryConfig {
  std::size_t k = 1;
  double horizon = 1.0;               // time t, or generation count n in discrete time
  std::string statistic = "one";      // one | above | state_indicators
  double x = 0.0;
  bool every_mark = false;
  std::vector<std::size_t> states;
  bool distinct = false;
  std::vector<double> observation_times;
};

struct RunConfig {
  std::size_t replicates = 100'000;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  std::size_t population_cap = 1'000'000;
  std::size_t tuple_cap = 1'000'000;
  double quadrature_step = 0.0;
};

struct OutputConfig {
  std::string dir = "out";
  std::vector<std::string> formats{"json", "csv"};
  std::string name;  // file stem; defaults to the subcommand
};

struct BoundsConfig {
  std::vector<double> x{0.0, 1.0, 2.0};
  std::vector<double> t{0.5, 1.0};
};

struct DiscreteGridConfig {
  std::vector<std::uint32_t> k{1, 2, 3};
  std::vector<std::uint32_t> generations{1, 2, 3, 4};
};

struct ExperimentConfig {
  ModelConfig model;
  QueryConfig query;
  RunConfig run;
  OutputConfig output;
  BoundsConfig bounds;
  DiscreteGridConfig grid;
  std::string source;      // file path or "<built-in>"
  std::uint64_t hash = 0;  // FNV-1a of the file bytes
};

ExperimentConfig parse_config(const std::string& text, const std::string& source);
ExperimentConfig load_config(const std::string& path);
/// Defaults only (binary branching Brownian motion, R = 1, t = 1, k = 1).
ExperimentConfig default_config();

std::uint64_t fnv1a(const std::string& bytes);

sim::ContinuousModel build_continuous(const ExperimentConfig& config);
discrete::DiscreteModel build_discrete(const ExperimentConfig& config);
estimators::Statistic build_statistic(const ExperimentConfig& config);

}  // namespace spinekit::cli
