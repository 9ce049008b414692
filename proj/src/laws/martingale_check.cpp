#include <chrono>
#include <stdexcept>

#include "spinekit/laws/motion.hpp"
#include "spinekit/stats/replicates.hpp"

namespace spinekit::laws {

MartingaleCheck martingale_check(const MotionModel& model, double x, double t, std::size_t replicates,
                                 std::uint64_t seed, unsigned workers) {
  if (!(t > 0.0)) {
    throw std::invalid_argument("martingale check needs t > 0");
  }
  if (replicates < 100) {
    throw std::invalid_argument("martingale check needs at least 100 replicates");
  }
  model.validate_origin(x);
  const auto start = std::chrono::steady_clock::now();
  auto samples = run_replicates(replicates, seed, workers, [&](Rng& rng, std::size_t) {
    ParticleRecord r;
    r.path.push_back({0.0, x, false});
    model.advance(r.path, t, Dynamics::p, rng);
    return model.zeta_ratio(r, t);
  });
  const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start;
  MartingaleCheck out;
  out.report = summarize(samples, seed, wall.count());
  out.pass = out.report.ci99.contains(1.0);
  return out;
}

}  // namespace spinekit::laws
