#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "spinekit/sim_dt/discrete.hpp"

namespace spinekit::discrete {

/// Y(u_1..u_k) = prod_i g_i(X_{u_i}) for per-mark state functions g_i.
struct StateStatistic {
  std::vector<std::vector<double>> factors;  // factors[i][state]

  static StateStatistic one(std::size_t k, std::size_t states);
  /// prod_i 1{X_{u_i} = target[i]}.
  static StateStatistic indicators(const std::vector<std::size_t>& target, std::size_t states);

  double operator()(std::span<const std::size_t> states) const;
  std::string describe() const;
};

inline constexpr std::size_t kOracleBudget = 10'000'000;

/// E_x[ sum over ordered k-tuples of generation n (repeats included) of
/// Y * 1{zeta > 0} ], from the exact law of the generation-n state counts.
double oracle_lhs(const DiscreteModel& model, const StateStatistic& y, std::size_t budget = kOracleBudget);

/// Q^k_x[ Y * weight ] by exhaustive enumeration of skeleton evolutions:
/// size-biased counts, mark-to-child assignments and tilted spine moves.
double oracle_rhs(const DiscreteModel& model, const StateStatistic& y,
                  MomentConvention convention = MomentConvention::per_node, std::size_t budget = kOracleBudget);

}  // namespace spinekit::discrete
