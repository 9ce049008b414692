#include "spinekit/laws/offspring_law.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "spinekit/core/errors.hpp"
#include "spinekit/core/tree_io.hpp"

namespace spinekit::laws {

namespace {

double integer_power(double base, std::uint32_t n) {
  double r = 1.0;
  for (std::uint32_t i = 0; i < n; ++i) {
    r *= base;
  }
  return r;
}

}  // namespace

OffspringLaw::OffspringLaw(std::vector<double> pmf) : pmf_(std::move(pmf)) {
  if (pmf_.empty()) {
    throw std::invalid_argument("offspring pmf is empty");
  }
  for (double p : pmf_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw std::invalid_argument("offspring pmf has a negative or non-finite entry");
    }
  }
  const double total = std::accumulate(pmf_.begin(), pmf_.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "offspring pmf sums to " << total << ", not 1";
    throw std::invalid_argument(msg.str());
  }
  while (pmf_.size() > 1 && pmf_.back() == 0.0) {
    pmf_.pop_back();
  }
  cdf_.resize(pmf_.size());
  std::partial_sum(pmf_.begin(), pmf_.end(), cdf_.begin());
}

OffspringLaw OffspringLaw::point_mass(std::uint32_t children) {
  std::vector<double> pmf(children + 1, 0.0);
  pmf[children] = 1.0;
  return OffspringLaw(std::move(pmf));
}

OffspringLaw OffspringLaw::from_map(const std::map<std::uint32_t, double>& pmf) {
  if (pmf.empty()) {
    throw std::invalid_argument("offspring pmf is empty");
  }
  std::vector<double> dense(pmf.rbegin()->first + 1, 0.0);
  for (const auto& [a, p] : pmf) {
    dense[a] = p;
  }
  return OffspringLaw(std::move(dense));
}

double OffspringLaw::probability(std::uint32_t children) const noexcept {
  return children < pmf_.size() ? pmf_[children] : 0.0;
}

double OffspringLaw::moment(std::uint32_t n) const noexcept {
  double m = 0.0;
  for (std::size_t a = 0; a < pmf_.size(); ++a) {
    m += integer_power(static_cast<double>(a), n) * pmf_[a];
  }
  return m;
}

OffspringLaw OffspringLaw::size_biased(std::uint32_t n) const {
  const double m = moment(n);
  if (!(m > 0.0)) {
    throw DegenerateLawError("size-biased law undefined: offspring law is concentrated at 0");
  }
  std::vector<double> biased(pmf_.size());
  for (std::size_t a = 0; a < pmf_.size(); ++a) {
    biased[a] = integer_power(static_cast<double>(a), n) * pmf_[a] / m;
  }
  // The weights sum to 1 up to rounding; renormalise so validation is exact.
  const double total = std::accumulate(biased.begin(), biased.end(), 0.0);
  for (auto& p : biased) {
    p /= total;
  }
  return OffspringLaw(std::move(biased));
}

std::uint32_t OffspringLaw::sample(Rng& rng) const {
  std::uniform_real_distribution<double> u(0.0, cdf_.back());
  const double x = u(rng);
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), x);
  auto a = static_cast<std::uint32_t>(it - cdf_.begin());
  return std::min<std::uint32_t>(a, max_children());
}

std::string OffspringLaw::describe() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (std::size_t a = 0; a < pmf_.size(); ++a) {
    if (pmf_[a] == 0.0) {
      continue;
    }
    os << (first ? "" : ",") << a << ':' << core::format_real(pmf_[a]);
    first = false;
  }
  os << '}';
  return os.str();
}

}  // namespace spinekit::laws
