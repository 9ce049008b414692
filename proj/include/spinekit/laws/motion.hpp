#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "spinekit/core/marked_tree.hpp"
#include "spinekit/laws/finite_chain.hpp"
#include "spinekit/stats/report.hpp"
#include "spinekit/stats/rng.hpp"

namespace spinekit::laws {

using core::ParticleRecord;
using core::PathKnot;

/// P: the untilted motion. Q: motion tilted by the single-particle martingale.
enum class Dynamics { p, q };

/// Single-particle motion together with its martingale functional zeta and
/// the zeta-tilted dynamics. zeta must be segment-multiplicative: the ratio
/// over a stretch between two stored samples depends only on those samples.
class MotionModel {
 public:
  virtual ~MotionModel() = default;

  virtual std::string name() const = 0;

  /// Appends samples taking the path from path.back() to path.back().time + dt.
  /// Every appended sample carries the absorption flag.
  virtual void advance(std::vector<PathKnot>& path, double dt, Dynamics dynamics, Rng& rng) const = 0;

  /// zeta(X, to.time) / zeta(X, from.time) for consecutive samples; 0 once absorbed.
  virtual double segment_ratio(const PathKnot& from, const PathKnot& to) const = 0;

  /// Paths are constant between samples (jump processes), so any time can be queried.
  virtual bool step_paths() const { return false; }

  /// zeta == 1 and Q motion equals P motion.
  virtual bool trivial_zeta() const { return false; }

  /// Throws std::invalid_argument if the process cannot start at x.
  virtual void validate_origin(double x) const { (void)x; }

  /// X_v(t) for a time within the particle's stored path. Diffusions need a
  /// stored sample at exactly t (declare an observation grid); throws
  /// PathSampleError otherwise.
  double position_at(const ParticleRecord& record, double t) const;

  /// zeta(X_v, tau_v(t)) / zeta(X_v, sigma_v(t)) along one particle.
  double zeta_ratio(const ParticleRecord& record, double t) const;

  /// False once zeta has hit zero along the ancestral path by time t.
  bool zeta_positive(const ParticleRecord& record, double t) const;
};

using MotionPtr = std::shared_ptr<const MotionModel>;

/// (a) Standard Brownian motion, zeta == 1.
MotionPtr brownian();

/// (b) Brownian motion with zeta(X,t) = exp(lambda X_t - lambda^2 t / 2);
/// the tilted motion is Brownian motion with drift lambda.
MotionPtr brownian_girsanov(double lambda);

/// (c) Brownian motion absorbed at 0: zeta(X,t) = X_t 1{H_0 > t} / X_0. Under
/// P the hitting of 0 between samples is resolved exactly with the Brownian
/// bridge crossing probability; the tilted motion is a Bessel(3) process.
MotionPtr brownian_absorbed();

/// (d) Continuous-time finite-state chain; positions are state indices.
MotionPtr chain_motion(FiniteChain chain);

struct MartingaleCheck {
  EstimateReport report;
  bool pass = false;  // 1 lies in the 99% interval
};

/// Monte Carlo mean of zeta(X,t) for P-paths started at x.
MartingaleCheck martingale_check(const MotionModel& model, double x, double t, std::size_t replicates,
                                 std::uint64_t seed, unsigned workers = 1);

}  // namespace spinekit::laws
