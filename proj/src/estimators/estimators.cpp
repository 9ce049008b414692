#include "spinekit/estimators/estimators.hpp"

#include <chrono>
#include <stdexcept>

#include "spinekit/core/errors.hpp"
#include "spinekit/stats/kahan.hpp"
#include "spinekit/stats/replicates.hpp"

namespace spinekit::estimators {

using core::MarkedTree;

namespace {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void check_arity(const Statistic& y, std::size_t k) {
  if (y.arity() != k) {
    throw std::invalid_argument("statistic arity " + std::to_string(y.arity()) + " differs from k = " +
                                std::to_string(k));
  }
}

double enumerate(const MarkedTree* tree, std::span<const std::size_t> members, std::span<const double> positions,
                 const Statistic& y, double t, bool distinct, std::size_t cap) {
  const std::size_t n = members.size();
  const std::size_t k = y.arity();
  if (n == 0 || (distinct && n < k)) {
    return 0.0;
  }
  std::size_t count = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (count > cap / n) {
      throw BudgetExceededError("enumerating " + std::to_string(n) + "^" + std::to_string(k) +
                                " tuples exceeds the cap of " + std::to_string(cap));
    }
    count *= n;
  }
  std::vector<std::size_t> odometer(k, 0);
  std::vector<std::size_t> tuple(k);
  std::vector<double> pos(k);
  KahanSum total;
  for (;;) {
    bool keep = true;
    for (std::size_t i = 0; i < k && keep; ++i) {
      for (std::size_t j = 0; j < i && distinct; ++j) {
        keep = keep && odometer[i] != odometer[j];
      }
      tuple[i] = members[odometer[i]];
      pos[i] = positions[odometer[i]];
    }
    if (keep) {
      total += y.evaluate(tree, tuple, pos, t);
    }
    std::size_t p = k;
    while (p > 0 && ++odometer[p - 1] == n) {
      odometer[p - 1] = 0;
      --p;
    }
    if (p == 0) {
      break;
    }
  }
  return total.value();
}

}  // namespace

double tuple_sum(const MarkedTree* tree, std::span<const std::size_t> members, std::span<const double> positions,
                 const Statistic& y, double t, bool distinct, std::size_t cap) {
  const std::size_t k = y.arity();
  if (!y.is_factored() || (distinct && k > 2)) {
    return enumerate(tree, members, positions, y, t, distinct, cap);
  }
  double product = 1.0;
  for (const auto& f : y.factors()) {
    KahanSum s;
    for (const double p : positions) {
      s += f(p);
    }
    product *= s.value();
  }
  if (distinct && k == 2) {
    KahanSum diagonal;
    for (const double p : positions) {
      diagonal += y.factors()[0](p) * y.factors()[1](p);
    }
    product -= diagonal.value();
  }
  return product;
}

EstimateReport estimate_direct(const sim::ContinuousModel& model, const Statistic& y, double t,
                               const RunOptions& options) {
  const Stopwatch clock;
  const auto values = run_replicates(options.replicates, options.seed, options.workers, [&](Rng& rng, std::size_t) {
    const auto tree = sim::simulate_p(model, t, rng);
    std::vector<std::size_t> members;
    std::vector<double> positions;
    for (const auto u : tree.alive_indices(t)) {
      const auto& r = tree.record(u);
      if (model.motion->zeta_positive(r, t)) {
        members.push_back(u);
        positions.push_back(model.motion->position_at(r, t));
      }
    }
    return tuple_sum(&tree, members, positions, y, t, options.distinct_tuples, options.tuple_cap);
  });
  return summarize(values, options.seed, clock.seconds());
}

EstimateReport estimate_spine(const sim::ContinuousModel& model, const Statistic& y, double t,
                              const RunOptions& options) {
  const std::size_t k = y.arity();
  const auto mode =
      y.measurability() == Measurability::full_tree ? sim::SkeletonMode::full_tree : sim::SkeletonMode::skeleton_only;
  const Stopwatch clock;
  const auto values = run_replicates(options.replicates, options.seed, options.workers, [&](Rng& rng, std::size_t) {
    const auto q = sim::simulate_skeleton_q(model, t, k, rng, mode);
    const double w = sim::many_to_few_weight(q.weighted);
    if (w == 0.0) {
      return 0.0;
    }
    const auto& skel = q.weighted.skeleton;
    std::vector<double> positions(k);
    std::vector<std::size_t> tuple;
    for (std::size_t i = 0; i < k; ++i) {
      const auto& label = skel.mark_node(i);
      for (std::size_t j = 0; j < i && options.distinct_tuples; ++j) {
        if (skel.mark_node(j) == label) {
          return 0.0;
        }
      }
      positions[i] = model.motion->position_at(skel.node(label).record, t);
      if (q.tree) {
        tuple.push_back(q.tree->index_of(label));
      }
    }
    return w * y.evaluate(q.tree ? &*q.tree : nullptr, tuple, positions, t);
  });
  return summarize(values, options.seed, clock.seconds());
}

EstimateReport estimate_direct(const discrete::DiscreteModel& model, const Statistic& y, const RunOptions& options) {
  check_arity(y, model.k);
  const double n = static_cast<double>(model.generations);
  const Stopwatch clock;
  const auto values = run_replicates(options.replicates, options.seed, options.workers, [&](Rng& rng, std::size_t) {
    const auto tree = discrete::simulate_p_dt(model, rng);
    std::vector<std::size_t> members;
    std::vector<double> positions;
    for (const auto u : tree.alive_indices(n)) {
      const auto& knot = tree.record(u).start();
      if (!knot.absorbed) {
        members.push_back(u);
        positions.push_back(knot.position);
      }
    }
    return tuple_sum(&tree, members, positions, y, n, options.distinct_tuples, options.tuple_cap);
  });
  return summarize(values, options.seed, clock.seconds());
}

EstimateReport estimate_spine(const discrete::DiscreteModel& model, const Statistic& y, const RunOptions& options) {
  check_arity(y, model.k);
  const std::size_t k = model.k;
  const double n = static_cast<double>(model.generations);
  const auto mode =
      y.measurability() == Measurability::full_tree ? discrete::DtMode::full_tree : discrete::DtMode::skeleton_only;
  const Stopwatch clock;
  const auto values = run_replicates(options.replicates, options.seed, options.workers, [&](Rng& rng, std::size_t) {
    const auto q = discrete::simulate_skeleton_q_dt(model, rng, mode);
    const auto& skel = q.skeleton;
    std::vector<double> positions(k);
    std::vector<std::size_t> tuple;
    for (std::size_t i = 0; i < k; ++i) {
      const auto& label = skel.mark_node(i);
      for (std::size_t j = 0; j < i && options.distinct_tuples; ++j) {
        if (skel.mark_node(j) == label) {
          return 0.0;
        }
      }
      const auto& knot = skel.node(label).record.start();
      if (knot.absorbed) {
        return 0.0;
      }
      positions[i] = knot.position;
      if (q.tree) {
        tuple.push_back(q.tree->index_of(label));
      }
    }
    const double w = discrete::many_to_few_weight_dt(model, skel, options.convention);
    return w * y.evaluate(q.tree ? &*q.tree : nullptr, tuple, positions, n);
  });
  return summarize(values, options.seed, clock.seconds());
}

PairedReport compare_variance(const sim::ContinuousModel& model, const Statistic& y, double t,
                              const RunOptions& options) {
  PairedReport out;
  out.direct = estimate_direct(model, y, t, options);
  out.spine = estimate_spine(model, y, t, options);
  out.overlap99 = out.direct.ci99.overlaps(out.spine.ci99);
  out.wall_ratio = out.spine.wall_seconds > 0.0 ? out.direct.wall_seconds / out.spine.wall_seconds : 0.0;
  return out;
}

EstimateReport exceedance_probability(const sim::ContinuousModel& model, double x, double t,
                                      const RunOptions& options) {
  const Stopwatch clock;
  const auto values = run_replicates(options.replicates, options.seed, options.workers, [&](Rng& rng, std::size_t) {
    const auto tree = sim::simulate_p(model, t, rng);
    for (const auto u : tree.alive_indices(t)) {
      const auto& r = tree.record(u);
      if (model.motion->zeta_positive(r, t) && model.motion->position_at(r, t) > x) {
        return 1.0;
      }
    }
    return 0.0;
  });
  return summarize(values, options.seed, clock.seconds());
}

}  // namespace spinekit::estimators
