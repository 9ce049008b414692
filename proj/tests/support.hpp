#pragma once

#include <cstdint>
#include <vector>

#include "spinekit/core/marked_tree.hpp"
#include "spinekit/sim_ct/simulate.hpp"

namespace spinekit::testing {

using core::MarkedTree;
using core::ParticleLabel;
using core::ParticleRecord;
using core::PathKnot;

inline ParticleRecord particle(ParticleLabel label, double birth, double death,
                               std::optional<std::uint32_t> children, std::vector<PathKnot> path = {},
                               double horizon = 1.0) {
  ParticleRecord r;
  r.label = std::move(label);
  r.birth = birth;
  r.death = death;
  r.child_count = children;
  if (path.empty()) {
    path.push_back({birth, 0.0, false});
    const double end = death < horizon ? death : horizon;
    if (end > birth) {
      path.push_back({end, 0.0, false});
    }
  }
  r.path = std::move(path);
  return r;
}

/// Root alive on [0, horizon], never branching.
inline MarkedTree single_particle(double horizon = 1.0) {
  return MarkedTree({particle({}, 0.0, core::kInfinity, std::nullopt, {}, horizon)}, horizon, 0.0);
}

/// Root dies at `at` with `children` children that survive to the horizon.
inline MarkedTree one_branch(std::uint32_t children, double at = 0.3, double horizon = 1.0) {
  std::vector<ParticleRecord> records{particle({}, 0.0, at, children, {}, horizon)};
  for (std::uint32_t c = 1; c <= children; ++c) {
    records.push_back(particle({c}, at, core::kInfinity, std::nullopt, {}, horizon));
  }
  return MarkedTree(std::move(records), horizon, 0.0);
}

/// Horizon 1. Root branches at 0.2 into two; child (1) branches again at 0.5 into two.
inline MarkedTree unbalanced() {
  return MarkedTree({particle({}, 0.0, 0.2, 2u), particle({1}, 0.2, 0.5, 2u),
                     particle({2}, 0.2, core::kInfinity, std::nullopt),
                     particle({1, 1}, 0.5, core::kInfinity, std::nullopt),
                     particle({1, 2}, 0.5, core::kInfinity, std::nullopt)},
                    1.0, 0.0);
}

inline sim::ContinuousModel bbm(double rate = 1.0, laws::OffspringLaw law = laws::OffspringLaw::point_mass(2),
                                laws::MotionPtr motion = laws::brownian()) {
  sim::ContinuousModel m{std::move(motion), laws::BranchRate::constant(rate), std::move(law), 0.0, {}};
  return m;
}

}  // namespace spinekit::testing
