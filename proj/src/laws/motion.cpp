#include "spinekit/laws/motion.hpp"

#include <cmath>
#include <stdexcept>

#include "spinekit/core/errors.hpp"
#include "spinekit/core/tree_io.hpp"

namespace spinekit::laws {

double MotionModel::position_at(const ParticleRecord& record, double t) const {
  if (const auto* k = core::knot_exactly_at(record, t)) {
    return k->position;
  }
  const auto& before = core::knot_at_or_before(record, t);
  if (step_paths() && before.time <= t) {
    return before.position;
  }
  throw PathSampleError("no stored sample of particle " + record.label.to_string() + " at time " +
                        core::format_real(t) + "; declare it as an observation time");
}

double MotionModel::zeta_ratio(const ParticleRecord& record, double t) const {
  const double start = record.birth_at(t);
  const double end = record.death_at(t);
  if (end <= start) {
    return record.path.front().absorbed ? 0.0 : 1.0;
  }
  double ratio = 1.0;
  const auto& path = record.path;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const auto& a = path[i];
    const auto& b = path[i + 1];
    if (a.time >= end) {
      break;
    }
    if (b.time <= end) {
      ratio *= segment_ratio(a, b);
    } else if (step_paths()) {
      ratio *= segment_ratio(a, PathKnot{end, a.position, a.absorbed});
    } else {
      throw PathSampleError("zeta of particle " + record.label.to_string() +
                            " requested between stored samples at time " + core::format_real(end));
    }
    if (ratio == 0.0) {
      return 0.0;
    }
  }
  return path.front().absorbed ? 0.0 : ratio;
}

bool MotionModel::zeta_positive(const ParticleRecord& record, double t) const {
  const double end = record.death_at(t);
  if (const auto* k = core::knot_exactly_at(record, end)) {
    return !k->absorbed;
  }
  const auto& before = core::knot_at_or_before(record, end);
  if (before.absorbed) {
    return false;
  }
  if (!step_paths() && !trivial_zeta()) {
    throw PathSampleError("zeta of particle " + record.label.to_string() +
                          " requested between stored samples");
  }
  return true;
}

namespace {

class BrownianMotion final : public MotionModel {
 public:
  std::string name() const override { return "brownian"; }

  void advance(std::vector<PathKnot>& path, double dt, Dynamics, Rng& rng) const override {
    if (dt <= 0.0) {
      return;
    }
    const auto& from = path.back();
    std::normal_distribution<double> n(0.0, 1.0);
    path.push_back({from.time + dt, from.position + std::sqrt(dt) * n(rng), from.absorbed});
  }

  double segment_ratio(const PathKnot& from, const PathKnot& to) const override {
    return (from.absorbed || to.absorbed) ? 0.0 : 1.0;
  }

  bool trivial_zeta() const override { return true; }
};

class GirsanovBrownian final : public MotionModel {
 public:
  explicit GirsanovBrownian(double lambda) : lambda_(lambda) {
    if (!std::isfinite(lambda)) {
      throw std::invalid_argument("tilt parameter must be finite");
    }
  }

  std::string name() const override { return "brownian_girsanov(" + core::format_real(lambda_) + ")"; }

  void advance(std::vector<PathKnot>& path, double dt, Dynamics dyn, Rng& rng) const override {
    if (dt <= 0.0) {
      return;
    }
    const auto& from = path.back();
    std::normal_distribution<double> n(0.0, 1.0);
    const double drift = dyn == Dynamics::q ? lambda_ * dt : 0.0;
    path.push_back({from.time + dt, from.position + drift + std::sqrt(dt) * n(rng), from.absorbed});
  }

  double segment_ratio(const PathKnot& from, const PathKnot& to) const override {
    if (from.absorbed || to.absorbed) {
      return 0.0;
    }
    const double dt = to.time - from.time;
    return std::exp(lambda_ * (to.position - from.position) - 0.5 * lambda_ * lambda_ * dt);
  }

  bool trivial_zeta() const override { return lambda_ == 0.0; }

 private:
  double lambda_;
};

class AbsorbedBrownian final : public MotionModel {
 public:
  std::string name() const override { return "brownian_absorbed"; }

  void advance(std::vector<PathKnot>& path, double dt, Dynamics dyn, Rng& rng) const override {
    if (dt <= 0.0) {
      return;
    }
    const auto from = path.back();
    std::normal_distribution<double> n(0.0, 1.0);
    const double sd = std::sqrt(dt);
    if (dyn == Dynamics::q && !from.absorbed) {
      // Bessel(3): radial part of a 3-d Brownian motion started at (x, 0, 0).
      const double a = from.position + sd * n(rng);
      const double b = sd * n(rng);
      const double c = sd * n(rng);
      path.push_back({from.time + dt, std::sqrt(a * a + b * b + c * c), false});
      return;
    }
    const double to = from.position + sd * n(rng);
    bool absorbed = from.absorbed || from.position <= 0.0 || to <= 0.0;
    if (!absorbed) {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      absorbed = u(rng) < std::exp(-2.0 * from.position * to / dt);
    }
    path.push_back({from.time + dt, to, absorbed});
  }

  double segment_ratio(const PathKnot& from, const PathKnot& to) const override {
    if (from.absorbed || to.absorbed || from.position <= 0.0) {
      return 0.0;
    }
    return to.position / from.position;
  }

  void validate_origin(double x) const override {
    if (!(x > 0.0)) {
      throw std::invalid_argument("absorbed Brownian motion must start above 0");
    }
  }
};

class ChainMotion final : public MotionModel {
 public:
  explicit ChainMotion(FiniteChain chain) : chain_(std::move(chain)) {
    if (chain_.clock() != ChainClock::continuous) {
      throw std::invalid_argument("chain motion in continuous time needs a rate matrix");
    }
  }

  std::string name() const override { return "chain " + chain_.describe(); }

  void advance(std::vector<PathKnot>& path, double dt, Dynamics dyn, Rng& rng) const override {
    if (dt <= 0.0) {
      return;
    }
    const bool tilted = dyn == Dynamics::q;
    const double end = path.back().time + dt;
    auto state = static_cast<std::size_t>(path.back().position);
    double now = path.back().time;
    const bool absorbed = path.back().absorbed;
    for (;;) {
      const double rate = chain_.exit_rate(state, tilted);
      double hold = kInfinityHold;
      if (rate > 0.0) {
        std::exponential_distribution<double> e(rate);
        hold = e(rng);
      }
      if (now + hold >= end) {
        break;
      }
      now += hold;
      state = chain_.jump(state, rng, tilted);
      path.push_back({now, static_cast<double>(state), absorbed});
    }
    path.push_back({end, static_cast<double>(state), absorbed});
  }

  double segment_ratio(const PathKnot& from, const PathKnot& to) const override {
    if (from.absorbed || to.absorbed) {
      return 0.0;
    }
    const auto i = static_cast<std::size_t>(from.position);
    const auto j = static_cast<std::size_t>(to.position);
    return chain_.holding_ratio(i, to.time - from.time) * (i == j ? 1.0 : chain_.jump_ratio(i, j));
  }

  bool step_paths() const override { return true; }
  bool trivial_zeta() const override { return !chain_.is_tilted(); }

  void validate_origin(double x) const override {
    if (!(x >= 0.0) || x != std::floor(x) || x >= static_cast<double>(chain_.states())) {
      throw std::invalid_argument("chain motion must start at a state index");
    }
  }

 private:
  static constexpr double kInfinityHold = core::kInfinity;
  FiniteChain chain_;
};

}  // namespace

MotionPtr brownian() { return std::make_shared<BrownianMotion>(); }
MotionPtr brownian_girsanov(double lambda) { return std::make_shared<GirsanovBrownian>(lambda); }
MotionPtr brownian_absorbed() { return std::make_shared<AbsorbedBrownian>(); }
MotionPtr chain_motion(FiniteChain chain) { return std::make_shared<ChainMotion>(std::move(chain)); }

}  // namespace spinekit::laws
