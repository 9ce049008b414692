#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "spinekit/core/label.hpp"
#include "spinekit/core/marked_tree.hpp"

namespace spinekit::core {

/// k marks, each following one line of descent. Mark i is stored as the
/// label it ends on at the tree horizon (alive there, or in the graveyard);
/// the line of descent is the set of prefixes of that label.
class SpineAssignment {
 public:
  explicit SpineAssignment(std::vector<ParticleLabel> terminals);

  std::size_t k() const noexcept { return terminals_.size(); }
  const ParticleLabel& terminal(std::size_t mark) const { return terminals_.at(mark); }
  std::span<const ParticleLabel> terminals() const noexcept { return terminals_; }

 private:
  std::vector<ParticleLabel> terminals_;
};

/// Checks every line of descent exists in `tree` and ends either alive at the
/// horizon or on a childless particle. Throws StructuralError otherwise.
void validate(const SpineAssignment& spines, const MarkedTree& tree);

/// node(xi^i_t): the particle carrying mark i at time t.
ParticleLabel mark_node_at(const MarkedTree& tree, const SpineAssignment& spines,
                           std::size_t mark, double t);

struct SkeletonNode {
  ParticleRecord record;
  std::uint32_t marks = 0;  // D(v)

  friend bool operator==(const SkeletonNode&, const SkeletonNode&) = default;
};

/// The subtree of spine-carrying particles at a time t together with the mark
/// counts D(v) and the pairwise first split times.
class SkeletonRealization {
 public:
  /// `nodes` must be prefix-closed with D(v) equal to the number of marks whose
  /// node at `time` descends from v. Throws StructuralError otherwise.
  SkeletonRealization(std::vector<SkeletonNode> nodes, std::vector<ParticleLabel> mark_nodes,
                      double time);

  std::size_t k() const noexcept { return mark_nodes_.size(); }
  double time() const noexcept { return time_; }
  std::span<const SkeletonNode> nodes() const noexcept { return nodes_; }
  const SkeletonNode& node(const ParticleLabel& label) const;
  std::size_t node_index(const ParticleLabel& label) const;
  std::optional<std::size_t> parent_index(std::size_t node) const { return parent_.at(node); }

  const ParticleLabel& mark_node(std::size_t mark) const { return mark_nodes_.at(mark); }
  std::span<const ParticleLabel> mark_nodes() const noexcept { return mark_nodes_; }
  bool mark_in_graveyard(std::size_t mark) const;

  /// Position of the particle carrying mark i at `time()` (last stored sample).
  const PathKnot& spine_knot(std::size_t mark) const;

  /// T(i,j): first time marks i and j sit on different particles; +inf if
  /// they have not split by `time()` and for i == j.
  double split_time(std::size_t i, std::size_t j) const;

  /// Sum of D(v) over nodes carrying marks at time s (alive or in the graveyard).
  std::uint32_t marks_carried_at(double s) const;

  friend bool operator==(const SkeletonRealization&, const SkeletonRealization&) = default;

 private:
  double time_;
  std::vector<SkeletonNode> nodes_;
  std::vector<ParticleLabel> mark_nodes_;
  std::vector<std::optional<std::size_t>> parent_;
  std::vector<double> split_;  // k x k row-major
};

SkeletonRealization extract_skeleton(const MarkedTree& tree, const SpineAssignment& spines, double t);

/// skel_{u_1..u_k}(t) for an arbitrary tuple of particles alive at t or in the
/// graveyard by t.
SkeletonRealization skeleton_of_tuple(const MarkedTree& tree, std::span<const ParticleLabel> tuple,
                                      double t);

/// Index-level skeleton of a tuple: (tree index, D) for every v <= some u_j,
/// ordered by tree index. Cheap enough for enumerating all k-tuples of N(t).
std::vector<std::pair<std::size_t, std::uint32_t>> tuple_skeleton(
    const MarkedTree& tree, std::span<const std::size_t> tuple);

/// P^k(xi^1_t = u_1, ..., xi^k_t = u_k | F_t): product over skeleton nodes
/// dead by t of A_v^{-D(v)}. Childless nodes made no choice and contribute 1.
double spine_probability(const MarkedTree& tree, std::span<const ParticleLabel> tuple, double t);

}  // namespace spinekit::core
