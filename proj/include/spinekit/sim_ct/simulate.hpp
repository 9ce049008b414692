#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "spinekit/core/marked_tree.hpp"
#include "spinekit/core/skeleton.hpp"
#include "spinekit/laws/branch_rate.hpp"
#include "spinekit/laws/motion.hpp"
#include "spinekit/laws/offspring_law.hpp"
#include "spinekit/stats/rng.hpp"

namespace spinekit::sim {

struct SimOptions {
  std::size_t population_cap = 1'000'000;
  /// Trapezoid step for the rate integral when R depends on position; 0 means t/1000.
  double quadrature_step = 0.0;
  /// Times at which every particle's position is stored (for statistics of
  /// diffusion paths at times other than the horizon).
  std::vector<double> observation_times;
  /// Diagnostic mutation: spine carriers branch at rate R instead of m^j R.
  bool unsound_wrong_rate = false;
};

struct ContinuousModel {
  laws::MotionPtr motion;
  laws::BranchRate rate;
  laws::OffspringLaw law;
  double origin = 0.0;
  SimOptions options;
};

/// Full branching process under P up to time t.
core::MarkedTree simulate_p(const ContinuousModel& model, double t, Rng& rng);

/// Marks follow uniformly chosen children at every branch; realises P^k given the tree.
core::SpineAssignment attach_spines(const core::MarkedTree& tree, std::size_t k, Rng& rng);

enum class SkeletonMode { skeleton_only, full_tree };

struct WeightedSkeleton {
  core::SkeletonRealization skeleton;
  /// prod_v zeta(X_v, sigma_v(t)) / zeta(X_v, tau_v(t)); 0 if a spine was absorbed.
  double zeta_ratio_product = 1.0;
  /// prod_v exp(int (m^{D(v)} - 1) R(X_v(s)) ds).
  double rate_integral_product = 1.0;
  bool absorbed = false;
};

struct QSample {
  WeightedSkeleton weighted;
  std::optional<core::MarkedTree> tree;  // full-tree mode only
  std::optional<core::SpineAssignment> spines;
};

/// k-spine skeleton under Q^k: a carrier of j marks branches at rate m^j R,
/// has size-biased offspring and moves under the tilted motion. In full-tree
/// mode the children left without marks grow independent P-subtrees.
QSample simulate_skeleton_q(const ContinuousModel& model, double t, std::size_t k, Rng& rng,
                            SkeletonMode mode = SkeletonMode::skeleton_only);

/// zeta_ratio_product * rate_integral_product (0 once a spine is absorbed).
double many_to_few_weight(const WeightedSkeleton& ws);

/// Weight factors of a skeleton given as particle records with mark counts.
WeightedSkeleton weigh(const ContinuousModel& model, core::SkeletonRealization skeleton);

/// sum over skeleton nodes of int_{sigma_v(t)}^{tau_v(t)} (m^{D(v)} - 1) R(X_v(s)) ds.
/// Exact for constant R (time intervals with equal mark profile are merged, so
/// a single spine gives exactly (m - 1) R t) and for piecewise-constant paths;
/// trapezoid over stored samples otherwise.
double rate_exponent(const ContinuousModel& model,
                     std::span<const std::pair<const core::ParticleRecord*, std::uint32_t>> nodes, double t);

/// Stored-sample times forced on every particle path for a run to horizon t.
std::vector<double> forced_sample_times(const ContinuousModel& model, double t);

}  // namespace spinekit::sim
