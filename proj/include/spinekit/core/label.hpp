#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace spinekit::core {

/// Ulam-Harris address of a particle: the empty path is the initial
/// ancestor, (3,2,7) is the seventh child of the second child of the third
/// child of the ancestor. Children are numbered from 1 in birth order.
class ParticleLabel {
 public:
  ParticleLabel() = default;
  explicit ParticleLabel(std::vector<std::uint32_t> path);
  ParticleLabel(std::initializer_list<std::uint32_t> path);

  static ParticleLabel root() { return {}; }

  std::size_t generation() const noexcept { return path_.size(); }
  bool is_root() const noexcept { return path_.empty(); }
  std::span<const std::uint32_t> path() const noexcept { return path_; }
  std::uint32_t back() const { return path_.back(); }

  ParticleLabel child(std::uint32_t index) const;
  ParticleLabel parent() const;
  ParticleLabel prefix(std::size_t length) const;
  ParticleLabel concat(const ParticleLabel& suffix) const;

  /// u <= v in the ancestral order: u is a (not necessarily strict) prefix of v.
  bool is_ancestor_of(const ParticleLabel& other) const noexcept;
  bool is_strict_ancestor_of(const ParticleLabel& other) const noexcept;

  /// "root" for the ancestor, otherwise dot-separated child indices ("1.2.7").
  std::string to_string() const;
  static ParticleLabel parse(std::string_view text);

  friend auto operator<=>(const ParticleLabel&, const ParticleLabel&) = default;
  friend bool operator==(const ParticleLabel&, const ParticleLabel&) = default;

 private:
  std::vector<std::uint32_t> path_;
};

std::size_t common_prefix_length(const ParticleLabel& a, const ParticleLabel& b) noexcept;

std::ostream& operator<<(std::ostream& os, const ParticleLabel& label);

struct ParticleLabelHash {
  std::size_t operator()(const ParticleLabel& label) const noexcept;
};

}  // namespace spinekit::core
