#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "spinekit/stats/rng.hpp"

namespace spinekit::laws {

using Matrix = std::vector<std::vector<double>>;

enum class ChainClock { discrete, continuous };

struct PerronPair {
  double root = 1.0;
  std::vector<double> vector;  // normalised to sum 1
  std::size_t iterations = 0;
};

/// Leading eigenpair of a square nonnegative matrix by power iteration on
/// M + I (same eigenvector, aperiodic). Once successive iterates differ by
/// less than `tolerance` in max norm it iterates on until they stop moving;
/// throws std::runtime_error if the tolerance is never met within `max_iterations`.
PerronPair perron_pair(const Matrix& nonnegative, double tolerance = 1e-12,
                       std::size_t max_iterations = 10'000'000);

/// Finite-state Markov chain (transition matrix or rate matrix) with an
/// optional exponential tilt. With potential f and tilt theta the
/// single-particle martingale is
///   discrete:   zeta(X,n) = exp(theta * sum_{m=1..n} f(X_m)) h(X_n) / (rho^n h(X_0)),
///               (rho, h) the Perron pair of P_ij exp(theta f(j));
///   continuous: zeta(X,t) = exp(int_0^t (theta f(X_s) - rho) ds) h(X_t) / h(X_0),
///               (rho, h) the Perron pair of G + theta diag(f).
/// theta = 0 gives zeta == 1. The tilted dynamics are the Doob h-transform.
class FiniteChain {
 public:
  /// Potential defaults to f(i) = i.
  FiniteChain(Matrix kernel, ChainClock clock, double tilt = 0.0, std::vector<double> potential = {});

  std::size_t states() const noexcept { return kernel_.size(); }
  ChainClock clock() const noexcept { return clock_; }
  const Matrix& kernel() const noexcept { return kernel_; }
  const Matrix& tilted_kernel() const noexcept { return tilted_; }
  double tilt() const noexcept { return tilt_; }
  std::span<const double> potential() const noexcept { return potential_; }
  double perron_root() const noexcept { return perron_.root; }
  std::span<const double> perron_vector() const noexcept { return perron_.vector; }
  bool is_tilted() const noexcept { return tilt_ != 0.0; }

  /// Discrete clock: one transition from `from` under P (or the tilted chain).
  std::size_t step(std::size_t from, Rng& rng, bool tilted) const;
  /// Discrete clock: zeta(X, n+1) / zeta(X, n) for a transition from -> to.
  double step_ratio(std::size_t from, std::size_t to) const;

  /// Continuous clock: total jump rate out of `state`.
  double exit_rate(std::size_t state, bool tilted) const;
  /// Continuous clock: destination of a jump out of `from`.
  std::size_t jump(std::size_t from, Rng& rng, bool tilted) const;
  /// Continuous clock: zeta ratio accrued while holding in `state` for dt.
  double holding_ratio(std::size_t state, double dt) const;
  /// Continuous clock: zeta ratio of a jump from -> to.
  double jump_ratio(std::size_t from, std::size_t to) const;

  std::string describe() const;

 private:
  std::size_t sample_row(const std::vector<double>& row, std::size_t skip, double total, Rng& rng) const;

  Matrix kernel_;
  ChainClock clock_;
  double tilt_;
  std::vector<double> potential_;
  PerronPair perron_;
  Matrix tilted_;
};

}  // namespace spinekit::laws
