#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "spinekit/core/marked_tree.hpp"
#include "spinekit/estimators/statistic.hpp"
#include "spinekit/sim_ct/simulate.hpp"
#include "spinekit/sim_dt/discrete.hpp"
#include "spinekit/stats/report.hpp"

namespace spinekit::estimators {

struct RunOptions {
  std::size_t replicates = 100'000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  /// Sum over tuples of distinct particles only (default: all ordered tuples, repeats included).
  bool distinct_tuples = false;
  std::size_t tuple_cap = 1'000'000;
  discrete::MomentConvention convention = discrete::MomentConvention::per_node;
};

/// sum over ordered k-tuples of `members` of Y. Factored statistics use the
/// product of single sums (minus the diagonal for distinct pairs); anything
/// else is enumerated, subject to `cap` tuples.
double tuple_sum(const core::MarkedTree* tree, std::span<const std::size_t> members,
                 std::span<const double> positions, const Statistic& y, double t, bool distinct, std::size_t cap);

/// Monte Carlo mean over P of the k-fold sum over N(t), restricted to tuples
/// whose members all have zeta > 0.
EstimateReport estimate_direct(const sim::ContinuousModel& model, const Statistic& y, double t,
                               const RunOptions& options);
/// Monte Carlo mean over Q^k of many_to_few_weight * Y(spines).
EstimateReport estimate_spine(const sim::ContinuousModel& model, const Statistic& y, double t,
                              const RunOptions& options);

EstimateReport estimate_direct(const discrete::DiscreteModel& model, const Statistic& y, const RunOptions& options);
EstimateReport estimate_spine(const discrete::DiscreteModel& model, const Statistic& y, const RunOptions& options);

struct PairedReport {
  EstimateReport direct;
  EstimateReport spine;
  bool overlap99 = false;
  double wall_ratio = 0.0;  // direct / spine
};

PairedReport compare_variance(const sim::ContinuousModel& model, const Statistic& y, double t,
                              const RunOptions& options);

/// Monte Carlo P(A(x,t) >= 1): some particle alive at t lies above x.
EstimateReport exceedance_probability(const sim::ContinuousModel& model, double x, double t,
                                      const RunOptions& options);

}  // namespace spinekit::estimators
