#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>

namespace spinekit {

inline constexpr double kZ95 = 1.959963984540054;
inline constexpr double kZ99 = 2.5758293035489004;

struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double x) const noexcept { return lower <= x && x <= upper; }
  bool overlaps(const Interval& o) const noexcept { return lower <= o.upper && o.lower <= upper; }
};

/// Monte Carlo estimate with normal-approximation confidence intervals.
struct EstimateReport {
  double estimate = 0.0;
  double std_error = 0.0;  // sample std / sqrt(replicates)
  Interval ci95;
  Interval ci99;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
};

/// Summarises replicate values in index order; the result does not depend
/// on how the values were produced. Uses shifted data, so a constant sample
/// has exactly that constant as its mean and zero standard error.
EstimateReport summarize(std::span<const double> samples, std::uint64_t seed, double wall_seconds = 0.0);

}  // namespace spinekit
