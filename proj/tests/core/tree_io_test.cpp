#include <gtest/gtest.h>

#include <sstream>

#include "spinekit/core/errors.hpp"
#include "spinekit/core/skeleton.hpp"
#include "spinekit/core/tree_io.hpp"
#include "spinekit/sim_ct/simulate.hpp"
#include "support.hpp"

namespace spinekit::core {
namespace {

TEST(TreeIo, RealsRoundTripExactly) {
  for (const double v : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 6.02214076e23, 5e-324, kInfinity}) {
    EXPECT_EQ(parse_real(format_real(v)), v);
  }
  EXPECT_THROW(parse_real("1.0x"), StructuralError);
}

TEST(TreeIo, SimulatedTreeRoundTrips) {
  const auto model = spinekit::testing::bbm(1.5, laws::OffspringLaw({0.2, 0.0, 0.5, 0.3}));
  for (std::uint64_t i = 0; i < 20; ++i) {
    Rng rng = make_stream(3, i);
    const auto tree = sim::simulate_p(model, 1.0, rng);
    std::stringstream ss;
    write_tree(ss, tree);
    EXPECT_EQ(read_tree(ss), tree);
  }
}

TEST(TreeIo, SkeletonRoundTrips) {
  const auto model = spinekit::testing::bbm();
  Rng rng = make_stream(8, 0);
  const auto tree = sim::simulate_p(model, 1.0, rng);
  const auto skel = extract_skeleton(tree, sim::attach_spines(tree, 2, rng), 1.0);
  std::stringstream ss;
  write_skeleton(ss, skel);
  EXPECT_EQ(read_skeleton(ss), skel);
}

TEST(TreeIo, MalformedInputIsRejected) {
  std::stringstream ss("this is not a tree\n");
  EXPECT_ANY_THROW(read_tree(ss));
}

}  // namespace
}  // namespace spinekit::core
