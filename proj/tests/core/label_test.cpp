#include <gtest/gtest.h>

#include "spinekit/core/label.hpp"

namespace spinekit::core {

TEST(ParticleLabel, RootHasGenerationZero) {
  const auto root = ParticleLabel::root();
  EXPECT_TRUE(root.is_root());
  EXPECT_EQ(root.generation(), 0u);
  EXPECT_EQ(root.to_string(), "root");
}

TEST(ParticleLabel, ChildAndParentAreInverse) {
  const ParticleLabel u{3, 2, 7};
  EXPECT_EQ(u.child(4).parent(), u);
  EXPECT_EQ(u.parent(), (ParticleLabel{3, 2}));
  EXPECT_EQ(u.prefix(1), ParticleLabel{3});
  EXPECT_EQ(u.generation(), 3u);
}

TEST(ParticleLabel, AncestralOrder) {
  const ParticleLabel u{1, 2};
  const ParticleLabel v{1, 2, 1};
  EXPECT_TRUE(u.is_ancestor_of(v));
  EXPECT_TRUE(u.is_ancestor_of(u));
  EXPECT_FALSE(u.is_strict_ancestor_of(u));
  EXPECT_TRUE(ParticleLabel::root().is_strict_ancestor_of(u));
  EXPECT_FALSE(v.is_ancestor_of(u));
  EXPECT_FALSE((ParticleLabel{2}).is_ancestor_of(v));
  EXPECT_EQ(common_prefix_length(v, ParticleLabel{1, 3}), 1u);
}

TEST(ParticleLabel, ParseRoundTrip) {
  for (const auto& u : {ParticleLabel::root(), ParticleLabel{1}, ParticleLabel{3, 2, 7}, ParticleLabel{12, 1}}) {
    EXPECT_EQ(ParticleLabel::parse(u.to_string()), u);
  }
  EXPECT_EQ((ParticleLabel{3, 2, 7}).to_string(), "3.2.7");
}

TEST(ParticleLabel, RejectsMalformedText) {
  EXPECT_ANY_THROW(ParticleLabel::parse("1..2"));
  EXPECT_ANY_THROW(ParticleLabel::parse("0"));
  EXPECT_ANY_THROW(ParticleLabel::parse("a.b"));
}

TEST(ParticleLabel, ConcatAppendsPath) {
  EXPECT_EQ((ParticleLabel{1}).concat(ParticleLabel{2, 3}), (ParticleLabel{1, 2, 3}));
  EXPECT_LT(ParticleLabel{1}, (ParticleLabel{1, 1}));
}

}  // namespace spinekit::core
