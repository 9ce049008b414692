#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "spinekit/core/marked_tree.hpp"
#include "spinekit/core/skeleton.hpp"
#include "spinekit/laws/finite_chain.hpp"
#include "spinekit/laws/offspring_law.hpp"
#include "spinekit/stats/rng.hpp"

namespace spinekit::discrete {

/// Galton-Watson process whose particles carry the state of a finite chain:
/// a particle in state y has a child count drawn from the law, and each child
/// moves independently one step of the chain from y. Generation g lives on
/// the time interval [g, g+1).
struct DiscreteModel {
  laws::FiniteChain chain;
  laws::OffspringLaw law;
  std::uint32_t generations = 1;
  std::uint32_t k = 1;
  std::size_t initial_state = 0;
  std::size_t population_cap = 1'000'000;

  /// Throws std::invalid_argument on a continuous clock, k = 0 or a bad initial state.
  void validate() const;
};

/// Generation-indexed tree up to generation n: particles of generation g have
/// birth g, and death g+1 unless g = n. Positions are state indices.
core::MarkedTree simulate_p_dt(const DiscreteModel& model, Rng& rng);

enum class DtMode { skeleton_only, full_tree };

struct DiscreteQSample {
  core::SkeletonRealization skeleton;
  std::optional<core::MarkedTree> tree;  // full-tree mode only
};

/// k-spine skeleton under Q^k: a node carrying j marks has a size-biased(j)
/// child count, each mark picks a child uniformly, and spine children move
/// under the tilted chain. Unmarked children grow P-subtrees in full-tree mode.
DiscreteQSample simulate_skeleton_q_dt(const DiscreteModel& model, Rng& rng, DtMode mode = DtMode::skeleton_only);

/// How the offspring moment enters the discrete weight.
///   per_node: m^{D(v)} once for every skeleton node below the horizon generation.
///   per_edge: m^{D(p(v))} for every skeleton edge (diagnostic; overcounts split nodes).
enum class MomentConvention { per_node, per_edge };

/// prod over skeleton edges of zeta(p(v), |v|-1) / zeta(v, |v|) times the moment factor.
double many_to_few_weight_dt(const DiscreteModel& model, const core::SkeletonRealization& skeleton,
                             MomentConvention convention = MomentConvention::per_node);

/// zeta(X, n) > 0 for the lineage ending in a particle at state `state`.
bool zeta_positive_dt(const laws::FiniteChain& chain, std::size_t state);

}  // namespace spinekit::discrete
