#include <gtest/gtest.h>

#include <cmath>

#include "spinekit/laws/finite_chain.hpp"

namespace spinekit::laws {
namespace {

TEST(PerronPair, StochasticMatrixHasRootOne) {
  const auto p = perron_pair({{0.7, 0.3}, {0.4, 0.6}});
  EXPECT_NEAR(p.root, 1.0, 1e-12);
  EXPECT_NEAR(p.vector[0], 0.5, 1e-12);
  EXPECT_NEAR(p.vector[1], 0.5, 1e-12);
}

TEST(PerronPair, EigenEquationHolds) {
  const Matrix m{{1.0, 2.0, 0.5}, {0.3, 0.2, 1.0}, {0.0, 4.0, 0.1}};
  const auto p = perron_pair(m);
  for (std::size_t i = 0; i < 3; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
      row += m[i][j] * p.vector[j];
    }
    EXPECT_NEAR(row, p.root * p.vector[i], 1e-10);
  }
}

TEST(FiniteChain, DiscreteTiltIsMeanOneStepwise) {
  const FiniteChain chain({{0.7, 0.3}, {0.4, 0.6}}, ChainClock::discrete, 0.5);
  for (std::size_t i = 0; i < 2; ++i) {
    double mean = 0.0;
    double tilted_row = 0.0;
    for (std::size_t j = 0; j < 2; ++j) {
      mean += chain.kernel()[i][j] * chain.step_ratio(i, j);
      tilted_row += chain.tilted_kernel()[i][j];
    }
    EXPECT_NEAR(mean, 1.0, 1e-12);
    EXPECT_NEAR(tilted_row, 1.0, 1e-12);
  }
}

TEST(FiniteChain, UntiltedRatiosAreOne) {
  const FiniteChain chain({{-1.0, 1.0}, {2.0, -2.0}}, ChainClock::continuous);
  EXPECT_DOUBLE_EQ(chain.holding_ratio(0, 0.7), 1.0);
  EXPECT_DOUBLE_EQ(chain.jump_ratio(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(chain.exit_rate(1, false), 2.0);
}

TEST(FiniteChain, RejectsBadRows) {
  EXPECT_ANY_THROW(FiniteChain({{0.7, 0.2}, {0.4, 0.6}}, ChainClock::discrete));
  EXPECT_ANY_THROW(FiniteChain({{-1.0, 0.5}, {1.0, -1.0}}, ChainClock::continuous));
  EXPECT_ANY_THROW(FiniteChain({{0.5, 0.5}}, ChainClock::discrete));
}

TEST(FiniteChain, StepFrequencies) {
  const FiniteChain chain({{0.7, 0.3}, {0.4, 0.6}}, ChainClock::discrete);
  Rng rng = make_stream(2, 0);
  int ones = 0;
  const int n = 100'000;
  for (int i = 0; i < n; ++i) {
    ones += chain.step(0, rng, false) == 1;
  }
  EXPECT_NEAR(ones / double(n), 0.3, 5 * std::sqrt(0.21 / n));
}

}  // namespace
}  // namespace spinekit::laws
