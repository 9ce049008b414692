#include <gtest/gtest.h>

#include "spinekit/core/errors.hpp"
#include "spinekit/laws/offspring_law.hpp"

namespace spinekit::laws {
namespace {

TEST(Moment, PointMassTwo) { EXPECT_DOUBLE_EQ(moment(OffspringLaw::point_mass(2), 2), 4.0); }

TEST(Moment, CriticalBinary) { EXPECT_DOUBLE_EQ(moment(OffspringLaw({0.5, 0.0, 0.5}), 1), 1.0); }

TEST(Moment, ZerothMomentIsOne) {
  for (const auto& law : {OffspringLaw::point_mass(0), OffspringLaw({0.5, 0.0, 0.5}), OffspringLaw({0.1, 0.2, 0.3, 0.4})}) {
    EXPECT_DOUBLE_EQ(moment(law, 0), 1.0);
  }
}

TEST(Moment, IncreasingWhenMassAboveOne) {
  const OffspringLaw law({1.0 / 3, 1.0 / 3, 0.0, 1.0 / 3});
  for (std::uint32_t n = 0; n < 6; ++n) {
    EXPECT_LT(moment(law, n), moment(law, n + 1));
  }
}

TEST(SizeBias, KillsZero) {
  const auto q = size_bias(OffspringLaw({0.5, 0.0, 0.5}), 2);
  EXPECT_DOUBLE_EQ(q.probability(2), 1.0);
  EXPECT_DOUBLE_EQ(q.probability(0), 0.0);
}

TEST(SizeBias, PointMassOneIsFixed) {
  for (std::uint32_t n = 1; n < 4; ++n) {
    EXPECT_DOUBLE_EQ(size_bias(OffspringLaw::point_mass(1), n).probability(1), 1.0);
  }
}

TEST(SizeBias, OneOrTwo) {
  const auto q = size_bias(OffspringLaw({0.0, 0.5, 0.5}), 1);
  EXPECT_NEAR(q.probability(1), 1.0 / 3, 1e-15);
  EXPECT_NEAR(q.probability(2), 2.0 / 3, 1e-15);
}

TEST(SizeBias, Composes) {
  const OffspringLaw law({0.1, 0.2, 0.3, 0.4});
  const auto twice = size_bias(size_bias(law, 1), 2);
  const auto once = size_bias(law, 3);
  for (std::uint32_t a = 0; a <= 3; ++a) {
    EXPECT_NEAR(twice.probability(a), once.probability(a), 1e-15);
  }
}

TEST(SizeBias, DegenerateAtZero) {
  EXPECT_THROW(size_bias(OffspringLaw::point_mass(0), 1), DegenerateLawError);
}

TEST(OffspringLaw, RejectsBadPmf) {
  EXPECT_THROW(OffspringLaw({0.2, 0.0, 0.7}), std::invalid_argument);
  EXPECT_THROW(OffspringLaw({-0.1, 0.6, 0.5}), std::invalid_argument);
  EXPECT_THROW(OffspringLaw(std::vector<double>{}), std::invalid_argument);
}

TEST(OffspringLaw, SampleFrequencies) {
  const OffspringLaw law({0.2, 0.0, 0.5, 0.3});
  Rng rng = make_stream(4, 0);
  std::vector<int> counts(4, 0);
  const int n = 100'000;
  for (int i = 0; i < n; ++i) {
    ++counts.at(law.sample(rng));
  }
  EXPECT_EQ(counts[1], 0);
  for (std::uint32_t a = 0; a < 4; ++a) {
    const double p = law.probability(a);
    EXPECT_NEAR(counts[a] / double(n), p, 5 * std::sqrt(p * (1 - p) / n) + 1e-12);
  }
}

}  // namespace
}  // namespace spinekit::laws
