#include "spinekit/core/label.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>

#include "spinekit/core/errors.hpp"

namespace spinekit::core {

ParticleLabel::ParticleLabel(std::vector<std::uint32_t> path) : path_(std::move(path)) {
  if (std::find(path_.begin(), path_.end(), 0U) != path_.end()) {
    throw StructuralError("child indices in a label start at 1");
  }
}

ParticleLabel::ParticleLabel(std::initializer_list<std::uint32_t> path)
    : ParticleLabel(std::vector<std::uint32_t>(path)) {}

ParticleLabel ParticleLabel::child(std::uint32_t index) const {
  if (index == 0) {
    throw StructuralError("child indices in a label start at 1");
  }
  ParticleLabel result = *this;
  result.path_.push_back(index);
  return result;
}

ParticleLabel ParticleLabel::parent() const {
  if (is_root()) {
    throw StructuralError("the initial ancestor has no parent");
  }
  ParticleLabel result = *this;
  result.path_.pop_back();
  return result;
}

ParticleLabel ParticleLabel::prefix(std::size_t length) const {
  if (length > path_.size()) {
    throw StructuralError("prefix longer than label");
  }
  ParticleLabel result;
  result.path_.assign(path_.begin(), path_.begin() + static_cast<std::ptrdiff_t>(length));
  return result;
}

ParticleLabel ParticleLabel::concat(const ParticleLabel& suffix) const {
  ParticleLabel result = *this;
  result.path_.insert(result.path_.end(), suffix.path_.begin(), suffix.path_.end());
  return result;
}

bool ParticleLabel::is_ancestor_of(const ParticleLabel& other) const noexcept {
  return path_.size() <= other.path_.size() &&
         std::equal(path_.begin(), path_.end(), other.path_.begin());
}

bool ParticleLabel::is_strict_ancestor_of(const ParticleLabel& other) const noexcept {
  return path_.size() < other.path_.size() && is_ancestor_of(other);
}

std::string ParticleLabel::to_string() const {
  if (is_root()) {
    return "root";
  }
  std::string out;
  for (std::size_t i = 0; i < path_.size(); ++i) {
    if (i > 0) {
      out.push_back('.');
    }
    out += std::to_string(path_[i]);
  }
  return out;
}

ParticleLabel ParticleLabel::parse(std::string_view text) {
  if (text == "root") {
    return {};
  }
  std::vector<std::uint32_t> path;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t dot = std::min(text.find('.', pos), text.size());
    std::uint32_t value = 0;
    const auto* first = text.data() + pos;
    const auto* last = text.data() + dot;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || first == last) {
      throw StructuralError("malformed particle label: '" + std::string(text) + "'");
    }
    path.push_back(value);
    pos = dot + 1;
  }
  return ParticleLabel(std::move(path));
}

std::size_t common_prefix_length(const ParticleLabel& a, const ParticleLabel& b) noexcept {
  const auto pa = a.path();
  const auto pb = b.path();
  const auto [ia, ib] = std::mismatch(pa.begin(), pa.end(), pb.begin(), pb.end());
  return static_cast<std::size_t>(ia - pa.begin());
}

std::ostream& operator<<(std::ostream& os, const ParticleLabel& label) {
  return os << label.to_string();
}

std::size_t ParticleLabelHash::operator()(const ParticleLabel& label) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (auto v : label.path()) {
    h ^= std::hash<std::uint32_t>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

}  // namespace spinekit::core
