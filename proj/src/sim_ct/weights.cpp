#include "spinekit/sim_ct/weights.hpp"

#include <cmath>
#include <stdexcept>

#include "spinekit/core/errors.hpp"
#include "spinekit/stats/kahan.hpp"

namespace spinekit::sim {

using core::MarkedTree;
using core::ParticleRecord;

namespace {

using NodeList = std::vector<std::pair<const ParticleRecord*, std::uint32_t>>;

class TupleWeigher {
 public:
  TupleWeigher(const MarkedTree& tree, const ContinuousModel& model, double t)
      : tree_(tree), model_(model), t_(t), ratio_(tree.size(), -1.0), positive_(tree.size(), -1) {}

  double operator()(std::span<const std::size_t> tuple) {
    for (const auto u : tuple) {
      if (!positive(u)) {
        return 0.0;
      }
    }
    const auto skel = core::tuple_skeleton(tree_, tuple);
    NodeList nodes;
    nodes.reserve(skel.size());
    double zeta = 1.0;
    for (const auto& [idx, d] : skel) {
      nodes.emplace_back(&tree_.record(idx), d);
      zeta *= ratio(idx);
    }
    return zeta * std::exp(-rate_exponent(model_, nodes, t_));
  }

 private:
  bool positive(std::size_t idx) {
    if (positive_[idx] < 0) {
      positive_[idx] = model_.motion->zeta_positive(tree_.record(idx), t_) ? 1 : 0;
    }
    return positive_[idx] == 1;
  }

  double ratio(std::size_t idx) {
    if (model_.motion->trivial_zeta()) {
      return 1.0;
    }
    if (ratio_[idx] < 0.0) {
      ratio_[idx] = model_.motion->zeta_ratio(tree_.record(idx), t_);
    }
    return ratio_[idx];
  }

  const MarkedTree& tree_;
  const ContinuousModel& model_;
  double t_;
  std::vector<double> ratio_;
  std::vector<int> positive_;
};

}  // namespace

double zeta_tilde(const MarkedTree& tree, const core::SpineAssignment& spines, const ContinuousModel& model,
                  double t) {
  const auto skel = core::extract_skeleton(tree, spines, t);
  for (std::size_t i = 0; i < skel.k(); ++i) {
    if (skel.mark_in_graveyard(i) || !model.motion->zeta_positive(skel.node(skel.mark_node(i)).record, t)) {
      return 0.0;
    }
  }
  NodeList nodes;
  double value = 1.0;
  for (const auto& n : skel.nodes()) {
    nodes.emplace_back(&n.record, n.marks);
    if (!model.motion->trivial_zeta()) {
      value *= model.motion->zeta_ratio(n.record, t);
    }
    if (n.record.death <= t) {
      value *= std::pow(static_cast<double>(*n.record.child_count), static_cast<double>(n.marks));
    }
  }
  return value * std::exp(-rate_exponent(model, nodes, t));
}

double tuple_weight(const MarkedTree& tree, std::span<const std::size_t> tuple, const ContinuousModel& model,
                    double t) {
  for (const auto u : tuple) {
    if (!tree.record(u).alive_at(t)) {
      throw StructuralError("tuple member " + tree.record(u).label.to_string() + " is not alive at t");
    }
  }
  TupleWeigher w(tree, model, t);
  return w(tuple);
}

TupleTable enumerate_tuples(const MarkedTree& tree, const ContinuousModel& model, double t, std::size_t k,
                            std::size_t cap) {
  if (k == 0) {
    throw std::invalid_argument("k must be at least 1");
  }
  const auto alive = tree.alive_indices(t);
  const std::size_t n = alive.size();
  std::size_t count = 1;
  for (std::size_t i = 0; i < k && n > 0; ++i) {
    if (count > cap / n) {
      throw BudgetExceededError("enumerating " + std::to_string(n) + "^" + std::to_string(k) +
                                " tuples exceeds the cap of " + std::to_string(cap));
    }
    count *= n;
  }
  TupleTable out;
  if (n == 0) {
    return out;
  }
  out.tuples.reserve(count);
  out.weights.reserve(count);
  TupleWeigher weigher(tree, model, t);
  std::vector<std::size_t> odometer(k, 0);
  std::vector<std::size_t> tuple(k);
  for (;;) {
    for (std::size_t i = 0; i < k; ++i) {
      tuple[i] = alive[odometer[i]];
    }
    out.weights.push_back(weigher(tuple));
    out.tuples.push_back(tuple);
    std::size_t pos = k;
    while (pos > 0 && ++odometer[pos - 1] == n) {
      odometer[pos - 1] = 0;
      --pos;
    }
    if (pos == 0) {
      break;
    }
  }
  return out;
}

double z_process(const MarkedTree& tree, const ContinuousModel& model, double t, std::size_t k, std::size_t cap) {
  const auto table = enumerate_tuples(tree, model, t, k, cap);
  KahanSum z;
  for (const double w : table.weights) {
    z += w;
  }
  return z.value();
}

GibbsTable gibbs_weights(const MarkedTree& tree, const ContinuousModel& model, double t, std::size_t k,
                         std::size_t cap) {
  GibbsTable g;
  g.table = enumerate_tuples(tree, model, t, k, cap);
  KahanSum z;
  for (const double w : g.table.weights) {
    z += w;
  }
  g.z = z.value();
  if (g.z <= 0.0) {
    throw std::domain_error("Z^k(t) vanishes: no tuple of surviving particles");
  }
  g.probabilities.reserve(g.table.weights.size());
  for (const double w : g.table.weights) {
    g.probabilities.push_back(w / g.z);
  }
  return g;
}

}  // namespace spinekit::sim
