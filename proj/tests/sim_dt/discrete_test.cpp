#include <gtest/gtest.h>

#include <cmath>

#include "spinekit/core/errors.hpp"
#include "spinekit/sim_dt/discrete.hpp"
#include "spinekit/stats/report.hpp"

namespace spinekit::discrete {
namespace {

using laws::ChainClock;
using laws::FiniteChain;
using laws::OffspringLaw;

DiscreteModel model_of(OffspringLaw law, std::uint32_t n, std::uint32_t k,
                       FiniteChain chain = FiniteChain({{1.0}}, ChainClock::discrete)) {
  return DiscreteModel{std::move(chain), std::move(law), n, k};
}

TEST(SimulatePDt, DeterministicBinaryDoubles) {
  const auto model = model_of(OffspringLaw::point_mass(2), 3, 1);
  Rng rng = make_stream(40, 0);
  EXPECT_EQ(simulate_p_dt(model, rng).alive_indices(3.0).size(), 8u);
}

TEST(SimulatePDt, CriticalPopulationHasUnitMean) {
  const auto model = model_of(OffspringLaw({0.5, 0.0, 0.5}), 4, 1);
  std::vector<double> sizes;
  for (std::uint64_t i = 0; i < 40'000; ++i) {
    Rng rng = make_stream(41, i);
    sizes.push_back(static_cast<double>(simulate_p_dt(model, rng).alive_indices(4.0).size()));
  }
  const auto r = summarize(sizes, 41);
  EXPECT_TRUE(r.ci99.contains(1.0)) << r.estimate;
}

TEST(SimulatePDt, SingleStateChainStaysPut) {
  const auto model = model_of(OffspringLaw({0.0, 0.5, 0.5}), 3, 1);
  Rng rng = make_stream(42, 0);
  const auto tree = simulate_p_dt(model, rng);
  for (const auto& r : tree.records()) {
    for (const auto& knot : r.path) {
      EXPECT_EQ(knot.position, 0.0);
    }
  }
}

TEST(SimulatePDt, GenerationsAreUnitTimeSteps) {
  const auto model = model_of(OffspringLaw({0.2, 0.3, 0.5}), 3, 1);
  Rng rng = make_stream(43, 0);
  const auto tree = simulate_p_dt(model, rng);
  for (const auto& r : tree.records()) {
    EXPECT_EQ(r.birth, static_cast<double>(r.label.generation()));
  }
}

TEST(SimulatePDt, CapRaisesExplosion) {
  auto model = model_of(OffspringLaw::point_mass(3), 8, 1);
  model.population_cap = 1000;
  Rng rng = make_stream(44, 0);
  EXPECT_THROW(simulate_p_dt(model, rng), ExplosionError);
}

TEST(SkeletonQDt, SizeBiasKillsZero) {
  const auto model = model_of(OffspringLaw({0.5, 0.0, 0.5}), 4, 1);
  for (std::uint64_t i = 0; i < 200; ++i) {
    Rng rng = make_stream(45, i);
    const auto q = simulate_skeleton_q_dt(model, rng);
    for (const auto& n : q.skeleton.nodes()) {
      if (n.record.child_count) {
        EXPECT_EQ(*n.record.child_count, 2u);
      }
    }
  }
}

TEST(SkeletonQDt, TwoMarksSplitHalfTheTime) {
  const auto model = model_of(OffspringLaw::point_mass(2), 1, 2);
  const int n = 40'000;
  int split = 0;
  for (int i = 0; i < n; ++i) {
    Rng rng = make_stream(46, i);
    const auto q = simulate_skeleton_q_dt(model, rng);
    split += q.skeleton.mark_node(0) != q.skeleton.mark_node(1);
  }
  EXPECT_NEAR(split / double(n), 0.5, 4 * std::sqrt(0.25 / n));
}

TEST(SkeletonQDt, TrivialMotion) {
  const auto model = model_of(OffspringLaw({0.0, 0.5, 0.5}), 3, 2);
  Rng rng = make_stream(47, 0);
  const auto q = simulate_skeleton_q_dt(model, rng);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(q.skeleton.spine_knot(i).position, 0.0);
  }
}

TEST(WeightDt, SingleSpineIsMToTheN) {
  for (std::uint32_t n = 1; n <= 4; ++n) {
    const auto model = model_of(OffspringLaw::point_mass(2), n, 1);
    Rng rng = make_stream(48, n);
    EXPECT_DOUBLE_EQ(many_to_few_weight_dt(model, simulate_skeleton_q_dt(model, rng).skeleton), std::pow(2.0, n));
  }
}

TEST(WeightDt, TwoSpinesOneGeneration) {
  const auto model = model_of(OffspringLaw::point_mass(2), 1, 2);
  for (std::uint64_t i = 0; i < 20; ++i) {
    Rng rng = make_stream(49, i);
    EXPECT_DOUBLE_EQ(many_to_few_weight_dt(model, simulate_skeleton_q_dt(model, rng).skeleton), 4.0);
  }
}

TEST(WeightDt, TwoSpinesTwoGenerationsPerNodeVersusPerEdge) {
  const auto model = model_of(OffspringLaw::point_mass(2), 2, 2);
  bool saw_split = false;
  for (std::uint64_t i = 0; i < 100; ++i) {
    Rng rng = make_stream(50, i);
    const auto skel = simulate_skeleton_q_dt(model, rng).skeleton;
    EXPECT_DOUBLE_EQ(many_to_few_weight_dt(model, skel), 16.0);
    if (skel.split_time(0, 1) == 1.0) {
      // split at the root: the per-edge reading counts m^2 for each spine child
      saw_split = true;
      EXPECT_DOUBLE_EQ(many_to_few_weight_dt(model, skel, MomentConvention::per_edge), 64.0);
    }
  }
  EXPECT_TRUE(saw_split);
}

TEST(WeightDt, ConventionsAgreeForOneSpine) {
  const auto model = model_of(OffspringLaw({0.2, 0.3, 0.5}), 4, 1,
                              FiniteChain({{0.7, 0.3}, {0.4, 0.6}}, ChainClock::discrete, 0.5));
  for (std::uint64_t i = 0; i < 50; ++i) {
    Rng rng = make_stream(51, i);
    const auto skel = simulate_skeleton_q_dt(model, rng).skeleton;
    EXPECT_DOUBLE_EQ(many_to_few_weight_dt(model, skel, MomentConvention::per_node),
                     many_to_few_weight_dt(model, skel, MomentConvention::per_edge));
  }
}

}  // namespace
}  // namespace spinekit::discrete
