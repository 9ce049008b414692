#include <gtest/gtest.h>

#include <filesystem>

#include "spinekit/cli/config.hpp"
#include "spinekit/cli/verify.hpp"

namespace spinekit::cli {
namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text, "test.yaml");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(Config, DefaultsAreBinaryBbm) {
  const auto c = default_config();
  EXPECT_EQ(c.model.motion, "brownian");
  EXPECT_EQ(c.model.zeta, "one");
  EXPECT_EQ(c.query.k, 1u);
  EXPECT_EQ(c.query.horizon, 1.0);
  EXPECT_EQ(c.run.replicates, 100'000u);
  EXPECT_FALSE(c.run.seed.has_value());
  EXPECT_TRUE(closed_forms_apply(c));
}

TEST(Config, ShippedConfigsLoad) {
  for (const auto& entry : std::filesystem::directory_iterator(SPINEKIT_CONFIG_DIR)) {
    if (entry.path().filename() == "invalid_pmf.yaml") {
      EXPECT_THROW(load_config(entry.path().string()), ConfigError);
    } else {
      EXPECT_NO_THROW(load_config(entry.path().string())) << entry.path();
    }
  }
}

TEST(Config, ParsesNestedBlocks) {
  const auto c = parse_config(R"(
model:
  motion: {kind: brownian}
  zeta: {kind: girsanov, lambda: 0.5}
  offspring: {0: 0.25, 3: 0.75}
  rate: {kind: step, threshold: 1.0, below: 0.5, above: 2.0}
query:
  k: 2
  horizon: 0.75
  statistic: {kind: above, x: 1.5, marks: all}
  distinct: true
run: {replicates: 500, seed: 12, workers: 3}
output: {dir: somewhere, formats: [csv], name: stem}
)",
                              "inline");
  EXPECT_EQ(c.model.zeta, "girsanov");
  EXPECT_EQ(c.model.lambda, 0.5);
  EXPECT_EQ(c.model.offspring.at(3), 0.75);
  EXPECT_EQ(c.model.rate, "step");
  EXPECT_EQ(c.query.k, 2u);
  EXPECT_TRUE(c.query.every_mark);
  EXPECT_TRUE(c.query.distinct);
  EXPECT_EQ(*c.run.seed, 12u);
  EXPECT_EQ(c.output.formats, std::vector<std::string>{"csv"});
  EXPECT_FALSE(closed_forms_apply(c));
  const auto model = build_continuous(c);
  EXPECT_EQ(model.rate(0.0), 0.5);
  EXPECT_EQ(model.rate(1.0), 2.0);
  EXPECT_EQ(build_statistic(c).arity(), 2u);
}

TEST(Config, PmfMustSumToOne) {
  const auto e = error_of("model:\n  offspring: {0: 0.2, 2: 0.7}\n");
  EXPECT_NE(e.find("model.offspring"), std::string::npos) << e;
  EXPECT_NE(e.find("line 2"), std::string::npos) << e;
}

TEST(Config, UnknownFieldsAreNamed) {
  const auto e = error_of("model:\n  motion: {kind: brownian}\n  colour: blue\n");
  EXPECT_NE(e.find("model.colour"), std::string::npos) << e;
  EXPECT_NE(e.find("line 3"), std::string::npos) << e;
  EXPECT_NE(error_of("modle: {}\n").find("config.modle"), std::string::npos);
}

TEST(Config, RejectsBadValues) {
  EXPECT_NE(error_of("query: {k: 0}\n"), "");
  EXPECT_NE(error_of("query: {horizon: -1}\n"), "");
  EXPECT_NE(error_of("query: {k: two}\n"), "");
  EXPECT_NE(error_of("run: {seed: -3}\n"), "");
  EXPECT_NE(error_of("model: {zeta: {kind: sideways}}\n"), "");
  EXPECT_NE(error_of("model: {rate: {kind: constant, value: -1}}\n"), "");
  EXPECT_NE(error_of("model: {time: discrete}\nquery: {horizon: 1.5}\n"), "");
  EXPECT_NE(error_of("model: {zeta: {kind: absorbed}, origin: 0}\n"), "");
  EXPECT_NE(error_of("model: {motion: {kind: chain, matrix: [[0.5, 0.4], [0.5, 0.5]]}, time: discrete}\n"), "");
  EXPECT_NE(error_of("query: {k: 2, statistic: {kind: state_indicators, states: [0]}}\n"), "");
  EXPECT_NE(error_of("[1, 2, 3]\n"), "");
  EXPECT_NE(error_of("model: {offspring: {0: 0.5\n"), "");
}

TEST(Config, ZeroHorizonIsAllowed) { EXPECT_EQ(error_of("query: {horizon: 0}\n"), ""); }

TEST(Config, HashIsFnv1a) {
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(parse_config("run: {seed: 1}\n", "x").hash, fnv1a("run: {seed: 1}\n"));
}

TEST(Config, DiscreteModel) {
  const auto c = parse_config(R"(
model:
  time: discrete
  motion: {kind: chain, matrix: [[0.7, 0.3], [0.4, 0.6]]}
  zeta: {kind: eigen_tilt, theta: 0.5}
  offspring: {1: 0.5, 2: 0.5}
query: {k: 2, horizon: 3, statistic: {kind: state_indicators, states: [1, 0]}}
grid: {k: [1], generations: [1, 2]}
)",
                              "inline");
  const auto m = build_discrete(c);
  EXPECT_EQ(m.generations, 3u);
  EXPECT_EQ(m.k, 2u);
  EXPECT_TRUE(m.chain.is_tilted());
  EXPECT_EQ(c.grid.k, std::vector<std::uint32_t>{1});
}

}  // namespace
}  // namespace spinekit::cli
