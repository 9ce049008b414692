#pragma once

#include <functional>
#include <optional>
#include <string>

namespace spinekit::laws {

/// Branching rate R(y) with a declared bound R_max used for thinning.
class BranchRate {
 public:
  /// `eval` must satisfy 0 <= eval(y) <= r_max everywhere; violations found
  /// during simulation throw std::domain_error.
  BranchRate(std::function<double(double)> eval, double r_max, std::string description = "custom");

  static BranchRate constant(double rate);
  /// R(y) = below for y < threshold, above otherwise.
  static BranchRate step(double threshold, double below, double above);

  double operator()(double y) const;
  double max() const noexcept { return r_max_; }
  bool is_constant() const noexcept { return constant_.has_value(); }
  /// Only meaningful when is_constant().
  double constant_value() const noexcept { return constant_.value_or(0.0); }
  const std::string& description() const noexcept { return description_; }

 private:
  std::function<double(double)> eval_;
  double r_max_;
  std::optional<double> constant_;
  std::string description_;
};

}  // namespace spinekit::laws
