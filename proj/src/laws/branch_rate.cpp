#include "spinekit/laws/branch_rate.hpp"

#include <cmath>
#include <stdexcept>

#include "spinekit/core/tree_io.hpp"

namespace spinekit::laws {

BranchRate::BranchRate(std::function<double(double)> eval, double r_max, std::string description)
    : eval_(std::move(eval)), r_max_(r_max), description_(std::move(description)) {
  if (!eval_) {
    throw std::invalid_argument("branch rate needs an evaluator");
  }
  if (!(r_max >= 0.0) || !std::isfinite(r_max)) {
    throw std::invalid_argument("branch rate bound must be finite and nonnegative");
  }
}

BranchRate BranchRate::constant(double rate) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw std::invalid_argument("branch rate must be finite and nonnegative");
  }
  BranchRate r([rate](double) { return rate; }, rate, "constant(" + core::format_real(rate) + ")");
  r.constant_ = rate;
  return r;
}

BranchRate BranchRate::step(double threshold, double below, double above) {
  if (!(below >= 0.0) || !(above >= 0.0)) {
    throw std::invalid_argument("branch rate must be nonnegative");
  }
  if (below == above) {
    return constant(below);
  }
  return BranchRate([=](double y) { return y < threshold ? below : above; }, std::max(below, above),
                    "step(" + core::format_real(threshold) + "," + core::format_real(below) + "," +
                        core::format_real(above) + ")");
}

double BranchRate::operator()(double y) const {
  if (constant_) {
    return *constant_;
  }
  const double r = eval_(y);
  if (!(r >= 0.0) || r > r_max_) {
    throw std::domain_error("branch rate outside [0, R_max] at y = " + core::format_real(y));
  }
  return r;
}

}  // namespace spinekit::laws
