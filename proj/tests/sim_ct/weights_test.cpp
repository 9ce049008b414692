#include <gtest/gtest.h>

#include <cmath>

#include "spinekit/core/errors.hpp"
#include "spinekit/core/skeleton.hpp"
#include "spinekit/sim_ct/weights.hpp"
#include "spinekit/stats/report.hpp"
#include "support.hpp"

namespace spinekit::sim {
namespace {

using core::ParticleLabel;
using core::SpineAssignment;
using spinekit::testing::bbm;
using spinekit::testing::one_branch;
using spinekit::testing::single_particle;
using spinekit::testing::unbalanced;

TEST(ZetaTilde, NoBranchesYule) {
  EXPECT_NEAR(zeta_tilde(single_particle(), SpineAssignment({ParticleLabel::root()}), bbm(), 1.0), std::exp(-1.0),
              1e-15);
}

TEST(ZetaTilde, GraveyardSpineIsZero) {
  const auto model = bbm(1.0, laws::OffspringLaw({0.5, 0.0, 0.5}));
  EXPECT_EQ(zeta_tilde(one_branch(0), SpineAssignment({ParticleLabel::root()}), model, 1.0), 0.0);
}

TEST(ZetaTilde, OneBranchTwoMarks) {
  const auto model = bbm();
  const auto tree = one_branch(2);
  // D(root)=2 over [0,0.3]: exp(-3*0.3) * 2^2; then two unit-mark segments of 0.7.
  const double split = std::exp(-3 * 0.3) * 4 * std::exp(-0.7) * std::exp(-0.7);
  const double together = std::exp(-3 * 0.3) * 4 * std::exp(-3 * 0.7);
  EXPECT_NEAR(zeta_tilde(tree, SpineAssignment({{1}, {2}}), model, 1.0), split, 1e-14);
  EXPECT_NEAR(zeta_tilde(tree, SpineAssignment({{2}, {2}}), model, 1.0), together, 1e-14);
}

TEST(ZProcess, SingleTupleBeforeFirstBranch) {
  EXPECT_NEAR(z_process(single_particle(), bbm(), 1.0, 1), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(z_process(one_branch(2), bbm(), 0.25, 1), std::exp(-0.25), 1e-15);
}

TEST(ZProcess, SingleSpineYuleCountsParticles) {
  const auto model = bbm();
  for (std::uint64_t i = 0; i < 30; ++i) {
    Rng rng = make_stream(30, i);
    const auto tree = simulate_p(model, 1.0, rng);
    const double n = static_cast<double>(tree.alive_indices(1.0).size());
    EXPECT_NEAR(z_process(tree, model, 1.0, 1), n * std::exp(-1.0), 1e-12 * n);
  }
}

TEST(ZProcess, EnumerationCap) {
  const auto tree = unbalanced();
  EXPECT_THROW(z_process(tree, bbm(), 1.0, 3, 10), BudgetExceededError);
}

TEST(ZProcess, IsTheConditionalMeanOfZetaTilde) {
  const auto model = bbm();
  const auto tree = unbalanced();
  for (std::size_t k = 1; k <= 2; ++k) {
    const double z = z_process(tree, model, 1.0, k);
    Rng rng = make_stream(31, k);
    std::vector<double> xs;
    for (int i = 0; i < 4000; ++i) {
      xs.push_back(zeta_tilde(tree, attach_spines(tree, k, rng), model, 1.0));
    }
    const auto r = summarize(xs, 31);
    EXPECT_NEAR(r.estimate, z, 4 * r.std_error + 1e-15) << "k=" << k;
  }
}

TEST(ZProcess, ConditionalMeanOnSimulatedGirsanovTrees) {
  const auto model = bbm(1.0, laws::OffspringLaw({0.2, 0.0, 0.5, 0.3}), laws::brownian_girsanov(1.0));
  for (std::uint64_t tree_index = 0; tree_index < 3; ++tree_index) {
    Rng rng = make_stream(32, tree_index);
    const auto tree = simulate_p(model, 0.5, rng);
    const double z = z_process(tree, model, 0.5, 2);
    std::vector<double> xs;
    for (int i = 0; i < 4000; ++i) {
      xs.push_back(zeta_tilde(tree, attach_spines(tree, 2, rng), model, 0.5));
    }
    const auto r = summarize(xs, 32);
    EXPECT_NEAR(r.estimate, z, 4 * r.std_error + 1e-12);
  }
}

TEST(Gibbs, NormalisedAndMatchesTheTiltedSpineLaw) {
  const auto model = bbm(1.0, laws::OffspringLaw({0.1, 0.0, 0.6, 0.3}), laws::brownian_girsanov(0.5));
  for (std::uint64_t i = 0; i < 20; ++i) {
    Rng rng = make_stream(33, i);
    const auto tree = simulate_p(model, 0.8, rng);
    if (tree.alive_indices(0.8).empty()) {
      EXPECT_THROW(gibbs_weights(tree, model, 0.8, 2), std::domain_error);
      continue;
    }
    const auto g = gibbs_weights(tree, model, 0.8, 2);
    double total = 0.0;
    for (const double p : g.probabilities) {
      total += p;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_NEAR(g.z, z_process(tree, model, 0.8, 2), 1e-12 * g.z);
  }
}

TEST(TupleWeight, AgreesWithZetaTilde) {
  const auto model = bbm();
  const auto tree = unbalanced();
  const std::vector<std::size_t> tuple{tree.index_of({1, 2}), tree.index_of({2})};
  const auto spines = SpineAssignment({{1, 2}, {2}});
  const double product = 1.0 / (2.0 * 2.0 * 2.0);  // spine probability of this tuple
  EXPECT_NEAR(tuple_weight(tree, tuple, model, 1.0), zeta_tilde(tree, spines, model, 1.0) * product, 1e-15);
}

}  // namespace
}  // namespace spinekit::sim
