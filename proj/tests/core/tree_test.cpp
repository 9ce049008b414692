#include <gtest/gtest.h>

#include "spinekit/core/errors.hpp"
#include "support.hpp"

namespace spinekit::core {
namespace {

using spinekit::testing::one_branch;
using spinekit::testing::particle;
using spinekit::testing::single_particle;
using spinekit::testing::unbalanced;

TEST(AliveAt, SingleParticle) {
  EXPECT_EQ(alive_at(single_particle(), 0.5), std::vector<ParticleLabel>{ParticleLabel::root()});
}

TEST(AliveAt, BinaryBranch) {
  EXPECT_EQ(alive_at(one_branch(2), 0.5), (std::vector<ParticleLabel>{{1}, {2}}));
  EXPECT_EQ(alive_at(one_branch(2), 0.3), (std::vector<ParticleLabel>{{1}, {2}}));
  EXPECT_EQ(alive_at(one_branch(2), 0.29), std::vector<ParticleLabel>{ParticleLabel::root()});
}

TEST(AliveAt, GraveyardExcluded) {
  const auto tree = one_branch(0);
  EXPECT_TRUE(alive_at(tree, 0.5).empty());
  EXPECT_EQ(tree.graveyard_indices(0.5).size(), 1u);
  EXPECT_TRUE(tree.graveyard_indices(0.2).empty());
}

TEST(AliveAt, BeyondHorizonThrows) {
  EXPECT_THROW(alive_at(single_particle(1.0), 1.5), HorizonError);
  EXPECT_THROW(alive_at(single_particle(1.0), -0.1), HorizonError);
}

TEST(MarkedTree, NavigatesParentsAndChildren) {
  const auto tree = unbalanced();
  const auto u = tree.index_of({1, 2});
  EXPECT_EQ(tree.record(*tree.parent(u)).label, ParticleLabel{1});
  EXPECT_EQ(tree.children(tree.index_of({1})).size(), 2u);
  EXPECT_EQ(tree.lineage(u).size(), 3u);
  EXPECT_EQ(tree.record(*tree.ancestor_alive_at(u, 0.3)).label, ParticleLabel{1});
  EXPECT_FALSE(tree.find({3}).has_value());
}

TEST(MarkedTree, RejectsMissingParent) {
  EXPECT_THROW(MarkedTree({particle({}, 0.0, 0.3, 2u), particle({2}, 0.3, kInfinity, std::nullopt)}, 1.0, 0.0),
               StructuralError);
}

TEST(MarkedTree, RejectsChildBornAway) {
  EXPECT_THROW(MarkedTree({particle({}, 0.0, 0.3, 1u), particle({1}, 0.4, kInfinity, std::nullopt)}, 1.0, 0.0),
               StructuralError);
}

TEST(MarkedTree, RejectsDeathWithoutChildCount) {
  EXPECT_THROW(MarkedTree({particle({}, 0.0, 0.3, std::nullopt)}, 1.0, 0.0), StructuralError);
}

TEST(MarkedTree, KnotLookup) {
  auto r = particle({}, 0.0, kInfinity, std::nullopt, {{0.0, 0.0, false}, {0.5, 1.5, false}, {1.0, -0.5, false}});
  EXPECT_DOUBLE_EQ(knot_at_or_before(r, 0.7).position, 1.5);
  EXPECT_DOUBLE_EQ(knot_at_or_before(r, 1.0).position, -0.5);
  EXPECT_NE(knot_exactly_at(r, 0.5), nullptr);
  EXPECT_EQ(knot_exactly_at(r, 0.6), nullptr);
}

}  // namespace
}  // namespace spinekit::core
