#include "spinekit/core/skeleton.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "spinekit/core/errors.hpp"

namespace spinekit::core {

SpineAssignment::SpineAssignment(std::vector<ParticleLabel> terminals)
    : terminals_(std::move(terminals)) {
  if (terminals_.empty()) {
    throw StructuralError("a spine assignment carries at least one mark");
  }
}

void validate(const SpineAssignment& spines, const MarkedTree& tree) {
  for (std::size_t i = 0; i < spines.k(); ++i) {
    const auto& label = spines.terminal(i);
    const auto idx = tree.find(label);
    if (!idx) {
      throw StructuralError("mark " + std::to_string(i + 1) + " sits on nonexistent particle " +
                            label.to_string());
    }
    const auto& r = tree.record(*idx);
    if (r.child_count && *r.child_count > 0) {
      throw StructuralError("mark " + std::to_string(i + 1) + " stops on " + label.to_string() +
                            " although it has children");
    }
  }
}

ParticleLabel mark_node_at(const MarkedTree& tree, const SpineAssignment& spines, std::size_t mark,
                           double t) {
  if (t < 0.0 || t > tree.horizon()) {
    throw HorizonError("time outside the simulated range");
  }
  const auto terminal = tree.index_of(spines.terminal(mark));
  if (const auto a = tree.ancestor_alive_at(terminal, t)) {
    return tree.record(*a).label;
  }
  return spines.terminal(mark);  // graveyard
}

namespace {

std::vector<SkeletonNode> build_nodes(const MarkedTree& tree, std::span<const ParticleLabel> marks) {
  std::map<ParticleLabel, std::uint32_t> counts;
  for (const auto& u : marks) {
    for (std::size_t len = 0; len <= u.generation(); ++len) {
      ++counts[u.prefix(len)];
    }
  }
  std::vector<SkeletonNode> nodes;
  nodes.reserve(counts.size());
  for (const auto& [label, d] : counts) {
    nodes.push_back(SkeletonNode{tree.at(label), d});
  }
  return nodes;
}

}  // namespace

SkeletonRealization::SkeletonRealization(std::vector<SkeletonNode> nodes,
                                         std::vector<ParticleLabel> mark_nodes, double time)
    : time_(time), nodes_(std::move(nodes)), mark_nodes_(std::move(mark_nodes)) {
  if (mark_nodes_.empty()) {
    throw StructuralError("a skeleton carries at least one mark");
  }
  std::sort(nodes_.begin(), nodes_.end(),
            [](const SkeletonNode& a, const SkeletonNode& b) { return a.record.label < b.record.label; });
  parent_.assign(nodes_.size(), std::nullopt);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& label = nodes_[i].record.label;
    if (i > 0 && nodes_[i - 1].record.label == label) {
      throw StructuralError("duplicate skeleton node " + label.to_string());
    }
    std::uint32_t expected = 0;
    for (const auto& u : mark_nodes_) {
      expected += label.is_ancestor_of(u) ? 1U : 0U;
    }
    if (expected == 0 || nodes_[i].marks != expected) {
      throw StructuralError("skeleton node " + label.to_string() + " has inconsistent mark count");
    }
    if (!label.is_root()) {
      parent_[i] = node_index(label.parent());
    } else if (i != 0) {
      throw StructuralError("skeleton missing the initial ancestor");
    }
  }
  if (nodes_.empty() || !nodes_.front().record.label.is_root()) {
    throw StructuralError("skeleton missing the initial ancestor");
  }
  for (const auto& u : mark_nodes_) {
    (void)node_index(u);
  }

  const std::size_t k = mark_nodes_.size();
  split_.assign(k * k, kInfinity);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const auto& a = mark_nodes_[i];
      const auto& b = mark_nodes_[j];
      if (a == b) {
        continue;
      }
      const std::size_t d = common_prefix_length(a, b);
      if (d == a.generation() || d == b.generation()) {
        throw StructuralError("marks " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                              " sit on an ancestor and its descendant at the same time");
      }
      const double split = node(a.prefix(d + 1)).record.birth;
      split_[i * k + j] = split;
      split_[j * k + i] = split;
    }
  }
}

std::size_t SkeletonRealization::node_index(const ParticleLabel& label) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), label,
                             [](const SkeletonNode& n, const ParticleLabel& l) { return n.record.label < l; });
  if (it == nodes_.end() || it->record.label != label) {
    throw StructuralError("particle " + label.to_string() + " is not in the skeleton");
  }
  return static_cast<std::size_t>(it - nodes_.begin());
}

const SkeletonNode& SkeletonRealization::node(const ParticleLabel& label) const {
  return nodes_[node_index(label)];
}

bool SkeletonRealization::mark_in_graveyard(std::size_t mark) const {
  const auto& r = node(mark_nodes_.at(mark)).record;
  return r.graveyard() && r.death <= time_;
}

const PathKnot& SkeletonRealization::spine_knot(std::size_t mark) const {
  return knot_at_or_before(node(mark_nodes_.at(mark)).record, time_);
}

double SkeletonRealization::split_time(std::size_t i, std::size_t j) const {
  const std::size_t k = mark_nodes_.size();
  if (i >= k || j >= k) {
    throw std::out_of_range("mark index out of range");
  }
  return split_[i * k + j];
}

std::uint32_t SkeletonRealization::marks_carried_at(double s) const {
  std::uint32_t total = 0;
  for (const auto& n : nodes_) {
    const auto& r = n.record;
    const bool in_graveyard = r.graveyard() && r.death <= s;
    if (r.alive_at(s) || in_graveyard) {
      total += n.marks;
    }
  }
  return total;
}

SkeletonRealization extract_skeleton(const MarkedTree& tree, const SpineAssignment& spines, double t) {
  validate(spines, tree);
  std::vector<ParticleLabel> marks;
  marks.reserve(spines.k());
  for (std::size_t i = 0; i < spines.k(); ++i) {
    marks.push_back(mark_node_at(tree, spines, i, t));
  }
  auto nodes = build_nodes(tree, marks);
  return SkeletonRealization(std::move(nodes), std::move(marks), t);
}

SkeletonRealization skeleton_of_tuple(const MarkedTree& tree, std::span<const ParticleLabel> tuple,
                                      double t) {
  if (t < 0.0 || t > tree.horizon()) {
    throw HorizonError("time outside the simulated range");
  }
  for (const auto& u : tuple) {
    const auto& r = tree.at(u);
    const bool in_graveyard = r.graveyard() && r.death <= t;
    if (!r.alive_at(t) && !in_graveyard) {
      throw StructuralError("particle " + u.to_string() + " is neither alive nor in the graveyard at t");
    }
  }
  auto nodes = build_nodes(tree, tuple);
  return SkeletonRealization(std::move(nodes), std::vector<ParticleLabel>(tuple.begin(), tuple.end()), t);
}

std::vector<std::pair<std::size_t, std::uint32_t>> tuple_skeleton(const MarkedTree& tree,
                                                                  std::span<const std::size_t> tuple) {
  std::vector<std::pair<std::size_t, std::uint32_t>> out;
  for (const auto u : tuple) {
    std::optional<std::size_t> cur = u;
    while (cur) {
      auto it = std::lower_bound(out.begin(), out.end(), *cur,
                                 [](const auto& e, std::size_t v) { return e.first < v; });
      if (it != out.end() && it->first == *cur) {
        ++it->second;
      } else {
        out.insert(it, {*cur, 1U});
      }
      cur = tree.parent(*cur);
    }
  }
  return out;
}

double spine_probability(const MarkedTree& tree, std::span<const ParticleLabel> tuple, double t) {
  const auto skel = skeleton_of_tuple(tree, tuple, t);
  double p = 1.0;
  for (const auto& n : skel.nodes()) {
    const auto& r = n.record;
    if (r.death <= t && r.child_count && *r.child_count > 0) {
      p *= std::pow(static_cast<double>(*r.child_count), -static_cast<double>(n.marks));
    }
  }
  return p;
}

}  // namespace spinekit::core
