#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spinekit/cli/config.hpp"
#include "spinekit/sim_dt/discrete.hpp"

namespace spinekit::cli {

enum class CaseStatus { pass, fail, skipped };

std::string to_string(CaseStatus s);

struct GridCase {
  std::string law;
  std::uint32_t k = 1;
  std::uint32_t generations = 1;
  std::string chain;
  std::string zeta;
  std::string statistic;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_diff = 0.0;
  double tolerance = 0.0;  // 1e-10 (1 + |lhs|)
  CaseStatus status = CaseStatus::pass;
  std::string note;
};

/// Built-in oracle grid: four offspring laws, the requested k and n, a
/// one-state and an asymmetric two-state chain, zeta = 1 and an eigen-tilt,
/// and Y = 1 and a product of per-mark state indicators.
std::vector<GridCase> run_discrete_grid(const DiscreteGridConfig& grid, discrete::MomentConvention convention,
                                        unsigned workers);

struct Check {
  std::string name;
  double value = 0.0;
  double target = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool pass = false;
  std::string detail;
};

struct CtSuiteOptions {
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::size_t replicates = 100'000;       // direct vs spine comparisons
  std::size_t martingale_replicates = 10'000;
  std::size_t gibbs_trees = 100;
  std::size_t split_samples = 10'000;
  double split_horizon = 12.0;
  /// Diagnostic mutation: spine carriers branch at rate R instead of m^j R.
  bool unsound_wrong_rate = false;
};

/// Continuous-time verification suite on the configured model at the configured horizon.
std::vector<Check> run_ct_suite(const ExperimentConfig& config, const CtSuiteOptions& options);

/// e^t-type closed forms apply: Brownian motion, binary branching, R = 1,
/// and zeta not killing particles.
bool closed_forms_apply(const ExperimentConfig& config);

}  // namespace spinekit::cli
