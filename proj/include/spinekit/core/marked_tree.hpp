#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "spinekit/core/label.hpp"

namespace spinekit::core {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// One stored sample of a particle's position. `absorbed` records whether the
/// single-particle martingale has hit zero along the ancestral path by `time`.
struct PathKnot {
  double time = 0.0;
  double position = 0.0;
  bool absorbed = false;

  friend bool operator==(const PathKnot&, const PathKnot&) = default;
};

/// A particle of a marked tree. The path holds event-time samples over
/// [birth, min(death, horizon)], first knot at birth, last at the end.
/// Particles still alive at the horizon have death = +inf and no child count.
struct ParticleRecord {
  ParticleLabel label;
  double birth = 0.0;
  double death = kInfinity;
  std::optional<std::uint32_t> child_count;
  std::vector<PathKnot> path;

  /// Died leaving no children: sits in the graveyard from `death` on.
  bool graveyard() const noexcept { return child_count && *child_count == 0; }
  bool alive_at(double t) const noexcept { return birth <= t && t < death; }
  double birth_at(double t) const noexcept { return birth < t ? birth : t; }
  double death_at(double t) const noexcept { return death < t ? death : t; }
  const PathKnot& start() const { return path.front(); }
  const PathKnot& end() const { return path.back(); }

  friend bool operator==(const ParticleRecord&, const ParticleRecord&) = default;
};

/// Last stored knot with time <= t (the first knot if t precedes the birth).
const PathKnot& knot_at_or_before(const ParticleRecord& record, double t);

/// Stored knot at exactly time t, if any.
const PathKnot* knot_exactly_at(const ParticleRecord& record, double t);

/// Full realisation of the branching process up to a fixed horizon. Records
/// are kept sorted by label (parents precede children). Immutable once built.
class MarkedTree {
 public:
  /// Validates the tree conditions; throws StructuralError on violation.
  MarkedTree(std::vector<ParticleRecord> records, double horizon, double origin);

  double horizon() const noexcept { return horizon_; }
  double origin() const noexcept { return origin_; }
  std::size_t size() const noexcept { return records_.size(); }
  std::span<const ParticleRecord> records() const noexcept { return records_; }
  const ParticleRecord& record(std::size_t index) const { return records_.at(index); }
  const ParticleRecord& root() const { return records_.front(); }

  std::optional<std::size_t> find(const ParticleLabel& label) const;
  std::size_t index_of(const ParticleLabel& label) const;
  const ParticleRecord& at(const ParticleLabel& label) const { return records_[index_of(label)]; }

  std::optional<std::size_t> parent(std::size_t index) const;
  std::span<const std::size_t> children(std::size_t index) const;

  /// Indices from the root down to `index` inclusive.
  std::vector<std::size_t> lineage(std::size_t index) const;

  /// Indices of N(t) in label order. Throws HorizonError past the horizon.
  std::vector<std::size_t> alive_indices(double t) const;

  /// Particles that died childless at or before t.
  std::vector<std::size_t> graveyard_indices(double t) const;

  /// Index of the ancestor of `index` (possibly itself) alive at time s, or
  /// nullopt if the lineage ended in the graveyard by s.
  std::optional<std::size_t> ancestor_alive_at(std::size_t index, double s) const;

  friend bool operator==(const MarkedTree&, const MarkedTree&) = default;

 private:
  double horizon_;
  double origin_;
  std::vector<ParticleRecord> records_;
  std::vector<std::optional<std::size_t>> parent_;
  std::vector<std::vector<std::size_t>> children_;
};

/// N(t) as labels.
std::vector<ParticleLabel> alive_at(const MarkedTree& tree, double t);

}  // namespace spinekit::core
