#include "spinekit/core/marked_tree.hpp"

#include <algorithm>

#include "spinekit/core/errors.hpp"

namespace spinekit::core {

const PathKnot& knot_at_or_before(const ParticleRecord& record, double t) {
  if (record.path.empty()) {
    throw StructuralError("particle " + record.label.to_string() + " has no path samples");
  }
  auto it = std::upper_bound(record.path.begin(), record.path.end(), t,
                             [](double value, const PathKnot& k) { return value < k.time; });
  if (it == record.path.begin()) {
    return record.path.front();
  }
  return *std::prev(it);
}

const PathKnot* knot_exactly_at(const ParticleRecord& record, double t) {
  auto it = std::lower_bound(record.path.begin(), record.path.end(), t,
                             [](const PathKnot& k, double value) { return k.time < value; });
  if (it != record.path.end() && it->time == t) {
    return &*it;
  }
  return nullptr;
}

namespace {

void check_record(const ParticleRecord& r, double horizon) {
  const auto name = r.label.to_string();
  if (!(r.birth >= 0.0) || r.birth > r.death) {
    throw StructuralError("particle " + name + ": birth must satisfy 0 <= birth <= death");
  }
  if (r.death == kInfinity) {
    if (r.child_count) {
      throw StructuralError("particle " + name + ": alive at horizon but has a child count");
    }
  } else {
    if (!r.child_count) {
      throw StructuralError("particle " + name + ": died before horizon without a child count");
    }
    if (r.death > horizon) {
      throw StructuralError("particle " + name + ": death recorded beyond the horizon");
    }
  }
  if (r.path.empty() || r.path.front().time != r.birth) {
    throw StructuralError("particle " + name + ": path must start at the birth time");
  }
  for (std::size_t i = 1; i < r.path.size(); ++i) {
    if (r.path[i].time < r.path[i - 1].time) {
      throw StructuralError("particle " + name + ": path samples out of order");
    }
  }
}

}  // namespace

MarkedTree::MarkedTree(std::vector<ParticleRecord> records, double horizon, double origin)
    : horizon_(horizon), origin_(origin), records_(std::move(records)) {
  if (records_.empty()) {
    throw StructuralError("a marked tree contains at least the initial ancestor");
  }
  std::sort(records_.begin(), records_.end(),
            [](const ParticleRecord& a, const ParticleRecord& b) { return a.label < b.label; });
  if (!records_.front().label.is_root()) {
    throw StructuralError("a marked tree must contain the initial ancestor");
  }
  if (records_.front().birth != 0.0) {
    throw StructuralError("the initial ancestor is born at time 0");
  }
  parent_.assign(records_.size(), std::nullopt);
  children_.assign(records_.size(), {});
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    check_record(r, horizon_);
    if (i > 0 && records_[i - 1].label == r.label) {
      throw StructuralError("duplicate label " + r.label.to_string());
    }
    if (r.label.is_root()) {
      continue;
    }
    const auto p = find(r.label.parent());
    if (!p) {
      throw StructuralError("label set is not prefix-closed: missing parent of " +
                            r.label.to_string());
    }
    parent_[i] = *p;
    children_[*p].push_back(i);
  }
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    const std::uint32_t expected = r.child_count.value_or(0);
    if (children_[i].size() != expected) {
      throw StructuralError("particle " + r.label.to_string() + " records " +
                            std::to_string(expected) + " children but the tree holds " +
                            std::to_string(children_[i].size()));
    }
    for (std::size_t j = 0; j < children_[i].size(); ++j) {
      const auto& c = records_[children_[i][j]];
      if (c.label.back() != j + 1) {
        throw StructuralError("children of " + r.label.to_string() + " are not numbered 1..A");
      }
      if (c.birth != r.death) {
        throw StructuralError("child " + c.label.to_string() + " not born at its parent's death");
      }
    }
  }
}

std::optional<std::size_t> MarkedTree::find(const ParticleLabel& label) const {
  auto it = std::lower_bound(records_.begin(), records_.end(), label,
                             [](const ParticleRecord& r, const ParticleLabel& l) { return r.label < l; });
  if (it != records_.end() && it->label == label) {
    return static_cast<std::size_t>(it - records_.begin());
  }
  return std::nullopt;
}

std::size_t MarkedTree::index_of(const ParticleLabel& label) const {
  if (auto i = find(label)) {
    return *i;
  }
  throw StructuralError("particle " + label.to_string() + " is not in the tree");
}

std::optional<std::size_t> MarkedTree::parent(std::size_t index) const { return parent_.at(index); }

std::span<const std::size_t> MarkedTree::children(std::size_t index) const {
  return children_.at(index);
}

std::vector<std::size_t> MarkedTree::lineage(std::size_t index) const {
  std::vector<std::size_t> out;
  std::optional<std::size_t> cur = index;
  while (cur) {
    out.push_back(*cur);
    cur = parent_[*cur];
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> MarkedTree::alive_indices(double t) const {
  if (t < 0.0 || t > horizon_) {
    throw HorizonError("time " + std::to_string(t) + " outside the simulated range [0, " +
                       std::to_string(horizon_) + "]");
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (records_[i].alive_at(t)) {
      out.push_back(i);
    }
  }
  return out;
}

std::vector<std::size_t> MarkedTree::graveyard_indices(double t) const {
  if (t < 0.0 || t > horizon_) {
    throw HorizonError("time " + std::to_string(t) + " outside the simulated range");
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (records_[i].graveyard() && records_[i].death <= t) {
      out.push_back(i);
    }
  }
  return out;
}

std::optional<std::size_t> MarkedTree::ancestor_alive_at(std::size_t index, double s) const {
  std::optional<std::size_t> cur = index;
  if (records_.at(index).death <= s) {
    return std::nullopt;
  }
  while (cur && records_[*cur].birth > s) {
    cur = parent_[*cur];
  }
  return cur;
}

std::vector<ParticleLabel> alive_at(const MarkedTree& tree, double t) {
  std::vector<ParticleLabel> out;
  for (auto i : tree.alive_indices(t)) {
    out.push_back(tree.record(i).label);
  }
  return out;
}

}  // namespace spinekit::core
