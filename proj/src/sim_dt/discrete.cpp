#include "spinekit/sim_dt/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spinekit/core/errors.hpp"

namespace spinekit::discrete {

using core::ParticleLabel;
using core::ParticleRecord;
using core::PathKnot;

void DiscreteModel::validate() const {
  if (chain.clock() != laws::ChainClock::discrete) {
    throw std::invalid_argument("discrete-time model needs a transition matrix");
  }
  if (k == 0) {
    throw std::invalid_argument("k must be at least 1");
  }
  if (initial_state >= chain.states()) {
    throw std::invalid_argument("initial state out of range");
  }
}

bool zeta_positive_dt(const laws::FiniteChain& chain, std::size_t state) {
  return chain.perron_vector()[state] > 0.0;
}

namespace {

struct Pending {
  ParticleLabel label;
  std::uint32_t generation = 0;
  std::size_t state = 0;
  bool absorbed = false;
  std::vector<std::size_t> marks;
};

class Grower {
 public:
  Grower(const DiscreteModel& model, Rng& rng, std::size_t k, bool keep_unmarked)
      : model_(model), rng_(rng), keep_unmarked_(keep_unmarked), terminals_(k) {
    model.validate();
    for (std::size_t j = 1; j <= k; ++j) {
      biased_.push_back(model.law.size_biased(static_cast<std::uint32_t>(j)));
    }
  }

  void run(std::size_t k) {
    Pending root{ParticleLabel::root(), 0, model_.initial_state,
                 !zeta_positive_dt(model_.chain, model_.initial_state), {}};
    for (std::size_t i = 0; i < k; ++i) {
      root.marks.push_back(i);
    }
    stack_.push_back(std::move(root));
    while (!stack_.empty()) {
      Pending p = std::move(stack_.back());
      stack_.pop_back();
      grow(std::move(p));
    }
    std::vector<std::size_t> order(records_.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      order[i] = i;
    }
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return records_[a].label < records_[b].label; });
    std::vector<ParticleRecord> sorted;
    std::vector<std::uint32_t> marks;
    sorted.reserve(order.size());
    for (const auto i : order) {
      sorted.push_back(std::move(records_[i]));
      marks.push_back(marks_[i]);
    }
    records_ = std::move(sorted);
    marks_ = std::move(marks);
  }

  std::vector<ParticleRecord>& records() { return records_; }
  std::vector<std::uint32_t>& marks() { return marks_; }
  std::vector<ParticleLabel>& terminals() { return terminals_; }

 private:
  void grow(Pending p) {
    if (records_.size() >= model_.population_cap) {
      throw ExplosionError(records_.size(), static_cast<double>(p.generation));
    }
    const std::size_t j = p.marks.size();
    ParticleRecord r;
    r.label = p.label;
    r.birth = static_cast<double>(p.generation);
    r.path.push_back(PathKnot{r.birth, static_cast<double>(p.state), p.absorbed});
    if (p.generation < model_.generations) {
      r.death = r.birth + 1.0;
      r.path.push_back(PathKnot{r.death, static_cast<double>(p.state), p.absorbed});
      const std::uint32_t a = j > 0 ? biased_[j - 1].sample(rng_) : model_.law.sample(rng_);
      r.child_count = a;
      std::vector<std::vector<std::size_t>> child_marks(a);
      if (a == 0) {
        for (const auto m : p.marks) {
          terminals_[m] = r.label;
        }
      } else {
        std::uniform_int_distribution<std::uint32_t> pick(0, a - 1);
        for (const auto m : p.marks) {
          child_marks[pick(rng_)].push_back(m);
        }
      }
      std::vector<Pending> kids;
      for (std::uint32_t c = 1; c <= a; ++c) {
        auto& cm = child_marks[c - 1];
        if (cm.empty() && !keep_unmarked_) {
          continue;
        }
        const std::size_t next = model_.chain.step(p.state, rng_, !cm.empty());
        kids.push_back(Pending{r.label.child(c), p.generation + 1, next,
                               p.absorbed || !zeta_positive_dt(model_.chain, next), std::move(cm)});
      }
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
        stack_.push_back(std::move(*it));
      }
    } else {
      for (const auto m : p.marks) {
        terminals_[m] = r.label;
      }
    }
    records_.push_back(std::move(r));
    marks_.push_back(static_cast<std::uint32_t>(j));
  }

  const DiscreteModel& model_;
  Rng& rng_;
  bool keep_unmarked_;
  std::vector<laws::OffspringLaw> biased_;
  std::vector<Pending> stack_;
  std::vector<ParticleRecord> records_;
  std::vector<std::uint32_t> marks_;
  std::vector<ParticleLabel> terminals_;
};

}  // namespace

core::MarkedTree simulate_p_dt(const DiscreteModel& model, Rng& rng) {
  Grower g(model, rng, 0, true);
  g.run(0);
  return core::MarkedTree(std::move(g.records()), static_cast<double>(model.generations),
                          static_cast<double>(model.initial_state));
}

DiscreteQSample simulate_skeleton_q_dt(const DiscreteModel& model, Rng& rng, DtMode mode) {
  const bool full = mode == DtMode::full_tree;
  Grower g(model, rng, model.k, full);
  g.run(model.k);
  const double n = static_cast<double>(model.generations);
  if (full) {
    core::MarkedTree tree(std::move(g.records()), n, static_cast<double>(model.initial_state));
    core::SpineAssignment spines(std::move(g.terminals()));
    auto skel = core::extract_skeleton(tree, spines, n);
    return DiscreteQSample{std::move(skel), std::move(tree)};
  }
  std::vector<core::SkeletonNode> nodes;
  for (std::size_t i = 0; i < g.records().size(); ++i) {
    nodes.push_back(core::SkeletonNode{std::move(g.records()[i]), g.marks()[i]});
  }
  return DiscreteQSample{core::SkeletonRealization(std::move(nodes), std::move(g.terminals()), n), std::nullopt};
}

double many_to_few_weight_dt(const DiscreteModel& model, const core::SkeletonRealization& skeleton,
                             MomentConvention convention) {
  const auto nodes = skeleton.nodes();
  const double horizon = skeleton.time();
  double w = 1.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& node = nodes[i];
    const auto state = static_cast<std::size_t>(node.record.start().position);
    if (convention == MomentConvention::per_node && node.record.birth < horizon) {
      w *= model.law.moment(node.marks);
    }
    if (const auto parent = skeleton.parent_index(i)) {
      const auto& up = nodes[*parent];
      const auto from = static_cast<std::size_t>(up.record.start().position);
      w /= model.chain.step_ratio(from, state);
      if (convention == MomentConvention::per_edge) {
        w *= model.law.moment(up.marks);
      }
    }
  }
  return w;
}

}  // namespace spinekit::discrete
