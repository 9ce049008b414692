#include "spinekit/sim_ct/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spinekit/core/errors.hpp"

namespace spinekit::sim {

using core::MarkedTree;
using core::ParticleLabel;
using core::ParticleRecord;
using core::PathKnot;
using laws::Dynamics;

std::vector<double> forced_sample_times(const ContinuousModel& model, double t) {
  std::vector<double> out;
  for (const double s : model.options.observation_times) {
    if (s > 0.0 && s < t) {
      out.push_back(s);
    }
  }
  if (!model.rate.is_constant() && !model.motion->step_paths()) {
    const double h = model.options.quadrature_step > 0.0 ? model.options.quadrature_step : t / 1000.0;
    for (std::size_t i = 1;; ++i) {
      const double s = static_cast<double>(i) * h;
      if (s >= t) {
        break;
      }
      out.push_back(s);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

struct Pending {
  ParticleLabel label;
  double birth = 0.0;
  PathKnot start;
  std::vector<std::size_t> marks;
};

class Grower {
 public:
  Grower(const ContinuousModel& model, double t, std::size_t k, Rng& rng, bool keep_unmarked)
      : model_(model), t_(t), rng_(rng), keep_unmarked_(keep_unmarked),
        forced_(forced_sample_times(model, t)), terminals_(k) {
    if (!model.motion) {
      throw std::invalid_argument("model has no motion");
    }
    if (!(t >= 0.0) || !std::isfinite(t)) {
      throw std::invalid_argument("horizon must be finite and nonnegative");
    }
    model.motion->validate_origin(model.origin);
    biased_.reserve(k);
    for (std::size_t j = 1; j <= k; ++j) {
      biased_.push_back(model.law.size_biased(static_cast<std::uint32_t>(j)));
    }
  }

  void run(std::size_t k) {
    Pending root{ParticleLabel::root(), 0.0, PathKnot{0.0, model_.origin, false}, {}};
    for (std::size_t i = 0; i < k; ++i) {
      root.marks.push_back(i);
    }
    stack_.push_back(std::move(root));
    while (!stack_.empty()) {
      Pending p = std::move(stack_.back());
      stack_.pop_back();
      grow(std::move(p));
    }
    std::sort(records_.begin(), records_.end(),
              [](const ParticleRecord& a, const ParticleRecord& b) { return a.label < b.label; });
  }

  std::vector<ParticleRecord>& records() { return records_; }
  std::vector<std::uint32_t>& marks() { return marks_; }
  std::vector<ParticleLabel>& terminals() { return terminals_; }

 private:
  void advance_to(std::vector<PathKnot>& path, double target, Dynamics dyn) {
    auto it = std::upper_bound(forced_.begin(), forced_.end(), path.back().time);
    for (; it != forced_.end() && *it < target; ++it) {
      model_.motion->advance(path, *it - path.back().time, dyn, rng_);
      path.back().time = *it;
    }
    if (target > path.back().time) {
      model_.motion->advance(path, target - path.back().time, dyn, rng_);
      path.back().time = target;
    }
  }

  void grow(Pending p) {
    if (records_.size() >= model_.options.population_cap) {
      throw ExplosionError(records_.size(), p.birth);
    }
    const std::size_t j = p.marks.size();
    const Dynamics dyn = j > 0 ? Dynamics::q : Dynamics::p;
    const double boost =
        (j > 0 && !model_.options.unsound_wrong_rate) ? model_.law.moment(static_cast<std::uint32_t>(j)) : 1.0;
    const bool exact = model_.rate.is_constant();
    const double bound = boost * (exact ? model_.rate.constant_value() : model_.rate.max());

    ParticleRecord r;
    r.label = p.label;
    r.birth = p.birth;
    r.path.push_back(p.start);
    double now = p.birth;
    for (;;) {
      double candidate = core::kInfinity;
      if (bound > 0.0) {
        std::exponential_distribution<double> clock(bound);
        candidate = now + clock(rng_);
      }
      const double target = std::min(candidate, t_);
      advance_to(r.path, target, dyn);
      now = target;
      if (candidate >= t_) {
        break;
      }
      if (exact) {
        r.death = candidate;
        break;
      }
      std::uniform_real_distribution<double> u(0.0, 1.0);
      if (u(rng_) * model_.rate.max() < model_.rate(r.path.back().position)) {
        r.death = candidate;
        break;
      }
    }

    if (r.death < core::kInfinity) {
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
      // Pushed in reverse so children are grown in label order.
      for (std::uint32_t c = a; c >= 1; --c) {
        auto& cm = child_marks[c - 1];
        if (cm.empty() && !keep_unmarked_) {
          continue;
        }
        stack_.push_back(Pending{r.label.child(c), r.death, r.path.back(), std::move(cm)});
      }
    } else {
      for (const auto m : p.marks) {
        terminals_[m] = r.label;
      }
    }
    records_.push_back(std::move(r));
    marks_.push_back(static_cast<std::uint32_t>(j));
  }

  const ContinuousModel& model_;
  double t_;
  Rng& rng_;
  bool keep_unmarked_;
  std::vector<double> forced_;
  std::vector<laws::OffspringLaw> biased_;
  std::vector<Pending> stack_;
  std::vector<ParticleRecord> records_;
  std::vector<std::uint32_t> marks_;
  std::vector<ParticleLabel> terminals_;
};

}  // namespace

MarkedTree simulate_p(const ContinuousModel& model, double t, Rng& rng) {
  Grower g(model, t, 0, rng, true);
  g.run(0);
  return MarkedTree(std::move(g.records()), t, model.origin);
}

core::SpineAssignment attach_spines(const MarkedTree& tree, std::size_t k, Rng& rng) {
  if (k == 0) {
    throw std::invalid_argument("k must be at least 1");
  }
  std::vector<ParticleLabel> terminals;
  terminals.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t cur = 0;
    for (;;) {
      const auto kids = tree.children(cur);
      if (kids.empty()) {
        break;
      }
      std::uniform_int_distribution<std::size_t> pick(0, kids.size() - 1);
      cur = kids[pick(rng)];
    }
    terminals.push_back(tree.record(cur).label);
  }
  return core::SpineAssignment(std::move(terminals));
}

QSample simulate_skeleton_q(const ContinuousModel& model, double t, std::size_t k, Rng& rng, SkeletonMode mode) {
  if (k == 0) {
    throw std::invalid_argument("k must be at least 1");
  }
  const bool full = mode == SkeletonMode::full_tree;
  Grower g(model, t, k, rng, full);
  g.run(k);
  if (full) {
    MarkedTree tree(std::move(g.records()), t, model.origin);
    core::SpineAssignment spines(std::move(g.terminals()));
    auto skel = core::extract_skeleton(tree, spines, t);
    return QSample{weigh(model, std::move(skel)), std::move(tree), std::move(spines)};
  }
  std::vector<core::SkeletonNode> nodes;
  nodes.reserve(g.records().size());
  for (std::size_t i = 0; i < g.records().size(); ++i) {
    nodes.push_back(core::SkeletonNode{std::move(g.records()[i]), g.marks()[i]});
  }
  core::SkeletonRealization skel(std::move(nodes), std::move(g.terminals()), t);
  return QSample{weigh(model, std::move(skel)), std::nullopt, std::nullopt};
}

double many_to_few_weight(const WeightedSkeleton& ws) {
  if (ws.absorbed) {
    return 0.0;
  }
  return ws.zeta_ratio_product * ws.rate_integral_product;
}

WeightedSkeleton weigh(const ContinuousModel& model, core::SkeletonRealization skeleton) {
  const double t = skeleton.time();
  WeightedSkeleton ws{std::move(skeleton)};
  const auto& skel = ws.skeleton;
  for (std::size_t i = 0; i < skel.k(); ++i) {
    if (skel.mark_in_graveyard(i) || !model.motion->zeta_positive(skel.node(skel.mark_node(i)).record, t)) {
      ws.absorbed = true;
    }
  }
  std::vector<std::pair<const ParticleRecord*, std::uint32_t>> nodes;
  nodes.reserve(skel.nodes().size());
  double zeta = 1.0;
  for (const auto& n : skel.nodes()) {
    nodes.emplace_back(&n.record, n.marks);
    if (!ws.absorbed && !model.motion->trivial_zeta()) {
      zeta /= model.motion->zeta_ratio(n.record, t);
    }
  }
  ws.zeta_ratio_product = ws.absorbed ? 0.0 : zeta;
  ws.rate_integral_product = std::exp(rate_exponent(model, nodes, t));
  return ws;
}

double rate_exponent(const ContinuousModel& model,
                     std::span<const std::pair<const ParticleRecord*, std::uint32_t>> nodes, double t) {
  const auto& law = model.law;
  if (model.rate.is_constant()) {
    const double r = model.rate.constant_value();
    if (r == 0.0) {
      return 0.0;
    }
    std::vector<double> cuts;
    for (const auto& [rec, d] : nodes) {
      cuts.push_back(rec->birth_at(t));
      cuts.push_back(rec->death_at(t));
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    // Coefficient of R on each elementary interval; equal neighbours are merged.
    double total = 0.0;
    double run_start = 0.0;
    double run_coef = 0.0;
    bool open = false;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double a = cuts[i];
      const double b = cuts[i + 1];
      double coef = 0.0;
      for (const auto& [rec, d] : nodes) {
        if (rec->birth_at(t) <= a && b <= rec->death_at(t)) {
          coef += law.moment(d) - 1.0;
        }
      }
      if (open && coef == run_coef) {
        continue;
      }
      if (open) {
        total += run_coef * r * (a - run_start);
      }
      run_start = a;
      run_coef = coef;
      open = true;
    }
    if (open) {
      total += run_coef * r * (cuts.back() - run_start);
    }
    return total;
  }

  const auto& motion = *model.motion;
  double total = 0.0;
  for (const auto& [rec, d] : nodes) {
    const double coef = law.moment(d) - 1.0;
    const double from = rec->birth_at(t);
    const double to = rec->death_at(t);
    if (coef == 0.0 || to <= from) {
      continue;
    }
    const auto& path = rec->path;
    double integral = 0.0;
    if (motion.step_paths()) {
      for (std::size_t i = 0; i < path.size() && path[i].time < to; ++i) {
        const double end = (i + 1 < path.size()) ? std::min(path[i + 1].time, to) : to;
        integral += model.rate(path[i].position) * (end - path[i].time);
      }
    } else {
      if (core::knot_exactly_at(*rec, to) == nullptr) {
        throw PathSampleError("rate integral of particle " + rec->label.to_string() +
                              " needs a stored sample at its end time");
      }
      for (std::size_t i = 0; i + 1 < path.size() && path[i + 1].time <= to; ++i) {
        const double h = path[i + 1].time - path[i].time;
        integral += 0.5 * h * (model.rate(path[i].position) + model.rate(path[i + 1].position));
      }
    }
    total += coef * integral;
  }
  return total;
}

}  // namespace spinekit::sim
