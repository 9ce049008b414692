#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "spinekit/stats/rng.hpp"

namespace spinekit::laws {

/// Finite-support law of the number of children, pmf indexed by child count.
class OffspringLaw {
 public:
  /// Throws std::invalid_argument unless the entries are nonnegative and sum
  /// to 1 within 1e-12.
  explicit OffspringLaw(std::vector<double> pmf);

  static OffspringLaw point_mass(std::uint32_t children);
  static OffspringLaw from_map(const std::map<std::uint32_t, double>& pmf);

  std::span<const double> pmf() const noexcept { return pmf_; }
  double probability(std::uint32_t children) const noexcept;
  std::uint32_t max_children() const noexcept { return static_cast<std::uint32_t>(pmf_.size() - 1); }

  /// m^n = sum_a a^n pmf(a).
  double moment(std::uint32_t n) const noexcept;

  /// mu^n(a) = a^n pmf(a) / m^n. Throws DegenerateLawError when m^n = 0.
  OffspringLaw size_biased(std::uint32_t n) const;

  std::uint32_t sample(Rng& rng) const;

  std::string describe() const;

 private:
  std::vector<double> pmf_;
  std::vector<double> cdf_;
};

inline double moment(const OffspringLaw& law, std::uint32_t n) { return law.moment(n); }
inline OffspringLaw size_bias(const OffspringLaw& law, std::uint32_t n) { return law.size_biased(n); }

}  // namespace spinekit::laws
