#include "spinekit/cli/verify.hpp"

#include <algorithm>
#include <cmath>

#include "spinekit/core/errors.hpp"
#include "spinekit/core/tree_io.hpp"
#include "spinekit/estimators/closed_forms.hpp"
#include "spinekit/estimators/estimators.hpp"
#include "spinekit/sim_ct/weights.hpp"
#include "spinekit/sim_dt/oracle.hpp"
#include "spinekit/stats/ks.hpp"
#include "spinekit/stats/replicates.hpp"

namespace spinekit::cli {

std::string to_string(CaseStatus s) {
  switch (s) {
    case CaseStatus::pass:
      return "pass";
    case CaseStatus::fail:
      return "fail";
    case CaseStatus::skipped:
      return "skipped";
  }
  return "?";
}

std::vector<GridCase> run_discrete_grid(const DiscreteGridConfig& grid, discrete::MomentConvention convention,
                                        unsigned workers) {
  const std::vector<laws::OffspringLaw> laws{
      laws::OffspringLaw::point_mass(2),
      laws::OffspringLaw::from_map({{0, 0.5}, {2, 0.5}}),
      laws::OffspringLaw::from_map({{1, 0.5}, {2, 0.5}}),
      laws::OffspringLaw::from_map({{0, 1.0 / 3.0}, {1, 1.0 / 3.0}, {3, 1.0 / 3.0}}),
  };
  const std::vector<std::pair<std::string, laws::Matrix>> chains{
      {"1-state", {{1.0}}},
      {"2-state", {{0.7, 0.3}, {0.4, 0.6}}},
  };
  constexpr double kTilt = 0.5;

  struct CaseKey {
    std::size_t law;
    std::uint32_t k;
    std::uint32_t n;
    std::size_t chain;
    bool tilted;
    bool indicators;
  };
  std::vector<CaseKey> keys;
  for (std::size_t l = 0; l < laws.size(); ++l) {
    for (const auto k : grid.k) {
      for (const auto n : grid.generations) {
        for (std::size_t c = 0; c < chains.size(); ++c) {
          for (const bool tilted : {false, true}) {
            for (const bool ind : {false, true}) {
              keys.push_back(CaseKey{l, k, n, c, tilted, ind});
            }
          }
        }
      }
    }
  }

  return parallel_map<GridCase>(keys.size(), workers, [&](std::size_t i) {
    const auto& s = keys[i];
    const auto& [chain_name, matrix] = chains[s.chain];
    discrete::DiscreteModel model{laws::FiniteChain(matrix, laws::ChainClock::discrete, s.tilted ? kTilt : 0.0),
                                  laws[s.law], s.n, s.k, 0};
    const std::size_t states = matrix.size();
    std::vector<std::size_t> target;
    for (std::uint32_t m = 0; m < s.k; ++m) {
      target.push_back((m + 1) % states);
    }
    const auto y = s.indicators ? discrete::StateStatistic::indicators(target, states)
                                : discrete::StateStatistic::one(s.k, states);
    GridCase out;
    out.law = laws[s.law].describe();
    out.k = s.k;
    out.generations = s.n;
    out.chain = chain_name;
    out.zeta = s.tilted ? "eigen_tilt(" + core::format_real(kTilt) + ")" : "one";
    out.statistic = y.describe();
    try {
      out.lhs = discrete::oracle_lhs(model, y);
      out.rhs = discrete::oracle_rhs(model, y, convention);
      out.abs_diff = std::abs(out.lhs - out.rhs);
      out.tolerance = 1e-10 * (1.0 + std::abs(out.lhs));
      out.status = out.abs_diff <= out.tolerance ? CaseStatus::pass : CaseStatus::fail;
    } catch (const BudgetExceededError& e) {
      out.status = CaseStatus::skipped;
      out.note = e.what();
    }
    return out;
  });
}

bool closed_forms_apply(const ExperimentConfig& config) {
  const auto& m = config.model;
  return m.time == TimeMode::continuous && m.motion == "brownian" && (m.zeta == "one" || m.zeta == "girsanov") &&
         m.offspring.size() == 1 && m.offspring.count(2) == 1 && m.rate == "constant" && m.rate_value == 1.0 &&
         m.origin == 0.0;
}

namespace {

Check ci_check(std::string name, const EstimateReport& r, double target, std::string detail = {}) {
  Check c;
  c.name = std::move(name);
  c.value = r.estimate;
  c.target = target;
  c.lower = r.ci99.lower;
  c.upper = r.ci99.upper;
  // Zero-variance estimates are compared to rounding.
  const double slack = 1e-12 * std::max(1.0, std::abs(target));
  c.pass = c.lower - slack <= target && target <= c.upper + slack;
  c.detail = std::move(detail);
  return c;
}

std::optional<double> closed_form(const ExperimentConfig& config, const estimators::Statistic& y,
                                  const QueryConfig& q, double t) {
  if (!closed_forms_apply(config) || y.arity() > 2) {
    return std::nullopt;
  }
  using estimators::ScalarFunction;
  ScalarFunction first = ScalarFunction::one();
  ScalarFunction second = ScalarFunction::one();
  if (q.statistic == "above") {
    first = ScalarFunction::above(q.x);
    if (q.every_mark) {
      second = ScalarFunction::above(q.x);
    }
  } else if (q.statistic != "one") {
    return std::nullopt;
  }
  if (y.arity() == 1) {
    return estimators::many_to_one_closed_form(first, t);
  }
  return estimators::many_to_two_closed_form(first, second, t);
}

}  // namespace

std::vector<Check> run_ct_suite(const ExperimentConfig& config, const CtSuiteOptions& options) {
  auto model = build_continuous(config);
  model.options.unsound_wrong_rate = options.unsound_wrong_rate;
  const double t = config.query.horizon;
  std::vector<Check> checks;
  std::uint64_t stream = 0;
  auto next_seed = [&] { return options.seed + 0x9e3779b97f4a7c15ULL * ++stream; };

  // Direct and spine estimators against each other and the closed forms.
  struct Query {
    estimators::Statistic y;
    QueryConfig q;
  };
  std::vector<Query> queries;
  for (std::size_t k = 1; k <= 2; ++k) {
    QueryConfig q;
    q.k = k;
    queries.push_back(Query{estimators::Statistic::one(k), q});
  }
  if (config.query.statistic != "one") {
    queries.push_back(Query{build_statistic(config), config.query});
  }
  for (const auto& [y, q] : queries) {
    estimators::RunOptions run;
    run.replicates = options.replicates;
    run.workers = options.workers;
    run.tuple_cap = config.run.tuple_cap;
    run.seed = next_seed();
    const auto direct = estimators::estimate_direct(model, y, t, run);
    run.seed = next_seed();
    const auto spine = estimators::estimate_spine(model, y, t, run);
    const std::string tag = y.description() + "_k" + std::to_string(y.arity());
    Check overlap;
    overlap.name = "direct_spine_overlap_" + tag;
    overlap.value = direct.estimate;
    overlap.target = spine.estimate;
    overlap.lower = std::max(direct.ci99.lower, spine.ci99.lower);
    overlap.upper = std::min(direct.ci99.upper, spine.ci99.upper);
    overlap.pass = direct.ci99.overlaps(spine.ci99);
    overlap.detail = "99% intervals of the direct and spine estimators intersect";
    checks.push_back(overlap);
    if (const auto exact = closed_form(config, y, q, t)) {
      checks.push_back(ci_check("direct_covers_closed_form_" + tag, direct, *exact));
      checks.push_back(ci_check("spine_covers_closed_form_" + tag, spine, *exact));
    }
  }

  // Unit mean of the spine martingale and of its projection on the tree.
  for (std::size_t k = 1; k <= 2; ++k) {
    const auto tilde = summarize(
        run_replicates(options.martingale_replicates, next_seed(), options.workers,
                       [&](Rng& rng, std::size_t) {
                         const auto tree = sim::simulate_p(model, t, rng);
                         const auto spines = sim::attach_spines(tree, k, rng);
                         return sim::zeta_tilde(tree, spines, model, t);
                       }),
        options.seed);
    checks.push_back(ci_check("zeta_tilde_unit_mean_k" + std::to_string(k), tilde, 1.0));
    const auto z = summarize(run_replicates(options.martingale_replicates, next_seed(), options.workers,
                                            [&](Rng& rng, std::size_t) {
                                              const auto tree = sim::simulate_p(model, t, rng);
                                              return sim::z_process(tree, model, t, k, config.run.tuple_cap);
                                            }),
                             options.seed);
    checks.push_back(ci_check("z_unit_mean_k" + std::to_string(k), z, 1.0));
  }

  // Gibbs weights: normalisation and agreement with the spine-martingale identity.
  for (std::size_t k = 1; k <= 2; ++k) {
    const auto seed = next_seed();
    std::vector<double> worst = parallel_map<double>(options.gibbs_trees, options.workers, [&](std::size_t i) {
      Rng rng = make_stream(seed, i);
      const auto tree = sim::simulate_p(model, t, rng);
      if (sim::z_process(tree, model, t, k, config.run.tuple_cap) <= 0.0) {
        return 0.0;
      }
      const auto g = sim::gibbs_weights(tree, model, t, k, config.run.tuple_cap);
      double total = 0.0;
      double err = 0.0;
      for (std::size_t j = 0; j < g.probabilities.size(); ++j) {
        total += g.probabilities[j];
        std::vector<core::ParticleLabel> labels;
        for (const auto u : g.table.tuples[j]) {
          labels.push_back(tree.record(u).label);
        }
        const double identity = sim::zeta_tilde(tree, core::SpineAssignment(labels), model, t) *
                                core::spine_probability(tree, labels, t) / g.z;
        err = std::max(err, std::abs(identity - g.probabilities[j]));
      }
      return std::max(err, std::abs(total - 1.0));
    });
    Check c;
    c.name = "gibbs_normalisation_k" + std::to_string(k);
    c.value = *std::max_element(worst.begin(), worst.end());
    c.target = 0.0;
    c.lower = 0.0;
    c.upper = 1e-10;
    c.pass = c.value <= c.upper;
    c.detail = "max over trees of |sum of Gibbs weights - 1| and of the per-tuple identity error";
    checks.push_back(c);
  }

  // First split time of two spines.
  const double m1 = model.law.moment(1);
  const double m2 = model.law.moment(2);
  if (model.rate.is_constant() && model.rate.constant_value() * (m2 - m1) > 0.0) {
    const double rate = model.rate.constant_value() * (m2 - m1);
    const double horizon = std::max(options.split_horizon, 20.0 / rate);
    sim::ContinuousModel skeleton_model = model;
    skeleton_model.options.observation_times.clear();
    const auto samples = run_replicates(options.split_samples, next_seed(), options.workers,
                                        [&](Rng& rng, std::size_t) {
                                          const auto q = sim::simulate_skeleton_q(skeleton_model, horizon, 2, rng);
                                          return std::min(q.weighted.skeleton.split_time(0, 1), horizon);
                                        });
    const auto ks = ks_test(samples, [rate](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-rate * x); });
    Check c;
    c.name = "split_time_ks";
    c.value = ks.p_value;
    c.target = 0.01;
    c.lower = ks.statistic;
    c.upper = 1.0;
    c.pass = ks.p_value >= 0.01;
    c.detail = "Kolmogorov-Smirnov p-value of T(1,2) against Exp(" + core::format_real(rate) + ")";
    checks.push_back(c);
  }
  return checks;
}

}  // namespace spinekit::cli
