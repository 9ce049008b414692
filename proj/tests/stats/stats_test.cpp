#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "spinekit/stats/kahan.hpp"
#include "spinekit/stats/ks.hpp"
#include "spinekit/stats/replicates.hpp"
#include "spinekit/stats/report.hpp"

namespace spinekit {
namespace {

TEST(Report, ConstantSampleHasZeroError) {
  const std::vector<double> xs(100, 2.5);
  const auto r = summarize(xs, 42);
  EXPECT_EQ(r.estimate, 2.5);
  EXPECT_EQ(r.std_error, 0.0);
  EXPECT_TRUE(r.ci99.contains(2.5));
  EXPECT_EQ(r.seed, 42u);
  EXPECT_EQ(r.replicates, 100u);
}

TEST(Report, IntervalsAreCentred) {
  const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
  const auto r = summarize(xs, 0);
  EXPECT_DOUBLE_EQ(r.estimate, 2.5);
  EXPECT_NEAR(r.std_error, std::sqrt(5.0 / 3.0) / 2.0, 1e-15);
  EXPECT_NEAR(r.ci95.upper - r.estimate, r.estimate - r.ci95.lower, 1e-14);
  EXPECT_NEAR(r.ci99.upper - r.estimate, kZ99 * r.std_error, 1e-14);
}

TEST(Kahan, CompensatesSmallTerms) {
  KahanSum s;
  s += 1.0;
  for (int i = 0; i < 10'000; ++i) {
    s += 1e-16;
  }
  EXPECT_NEAR(s.value(), 1.0 + 1e-12, 1e-15);
}

TEST(Ks, KolmogorovSurvivalKnownValues) {
  EXPECT_NEAR(kolmogorov_survival(1.3580986393225505), 0.05, 1e-6);
  EXPECT_NEAR(kolmogorov_survival(1.6276236115189502), 0.01, 1e-6);
  EXPECT_DOUBLE_EQ(kolmogorov_survival(0.0), 1.0);
}

TEST(Ks, AcceptsCorrectLawRejectsWrongOne) {
  Rng rng = make_stream(1, 0);
  std::exponential_distribution<double> exp2(2.0);
  std::vector<double> xs(5000);
  for (auto& x : xs) {
    x = exp2(rng);
  }
  const auto right = ks_test(xs, [](double x) { return x <= 0 ? 0.0 : 1.0 - std::exp(-2.0 * x); });
  const auto wrong = ks_test(xs, [](double x) { return x <= 0 ? 0.0 : 1.0 - std::exp(-1.5 * x); });
  EXPECT_GT(right.p_value, 0.01);
  EXPECT_LT(wrong.p_value, 1e-6);
}

TEST(Replicates, IndependentOfWorkerCount) {
  auto body = [](Rng& rng, std::size_t i) { return std::uniform_real_distribution<double>()(rng) + double(i); };
  EXPECT_EQ(run_replicates(1000, 9, 1, body), run_replicates(1000, 9, 8, body));
  EXPECT_NE(run_replicates(10, 9, 1, body), run_replicates(10, 10, 1, body));
}

TEST(Replicates, RethrowsLowestFailingIndex) {
  auto body = [](Rng&, std::size_t i) -> double {
    if (i == 7 || i == 300) {
      throw std::runtime_error(std::to_string(i));
    }
    return 0.0;
  };
  try {
    run_replicates(1000, 0, 4, body);
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "7");
  }
}

TEST(Replicates, ParallelMapKeepsOrder) {
  const auto out = parallel_map<int>(50, 4, [](std::size_t i) { return static_cast<int>(i * i); });
  for (std::size_t i = 0; i < out.size(); ++i) {
    EXPECT_EQ(out[i], static_cast<int>(i * i));
  }
}

}  // namespace
}  // namespace spinekit
