#include "spinekit/stats/report.hpp"

#include <cmath>
#include <stdexcept>

#include "spinekit/stats/kahan.hpp"

namespace spinekit {

EstimateReport summarize(std::span<const double> samples, std::uint64_t seed, double wall_seconds) {
  if (samples.empty()) {
    throw std::invalid_argument("cannot summarise an empty sample");
  }
  const double n = static_cast<double>(samples.size());
  const double shift = samples.front();
  KahanSum dev;
  for (double x : samples) {
    dev += x - shift;
  }
  const double mean_dev = dev.value() / n;
  KahanSum sq;
  for (double x : samples) {
    const double d = (x - shift) - mean_dev;
    sq += d * d;
  }
  EstimateReport r;
  r.estimate = shift + mean_dev;
  const double var = samples.size() > 1 ? sq.value() / (n - 1.0) : 0.0;
  r.std_error = std::sqrt(var / n);
  r.ci95 = {r.estimate - kZ95 * r.std_error, r.estimate + kZ95 * r.std_error};
  r.ci99 = {r.estimate - kZ99 * r.std_error, r.estimate + kZ99 * r.std_error};
  r.replicates = samples.size();
  r.seed = seed;
  r.wall_seconds = wall_seconds;
  return r;
}

}  // namespace spinekit
