#pragma once

#include <cstddef>
#include <vector>

#include "spinekit/core/marked_tree.hpp"
#include "spinekit/core/skeleton.hpp"
#include "spinekit/sim_ct/simulate.hpp"

namespace spinekit::sim {

/// The spine martingale: indicator that no spine is absorbed, times
/// prod_{v in skel} zeta-ratio * E^k(v,t), times prod over skeleton nodes dead by t of A_v^{D(v)}.
double zeta_tilde(const core::MarkedTree& tree, const core::SpineAssignment& spines,
                  const ContinuousModel& model, double t);

/// Unnormalised Gibbs weight of a tuple of tree indices alive at t:
/// prod_{v in skel_u} zeta-ratio * E_u(v,t), or 0 if zeta(u_i, t) = 0 for some i.
double tuple_weight(const core::MarkedTree& tree, std::span<const std::size_t> tuple,
                    const ContinuousModel& model, double t);

struct TupleTable {
  std::vector<std::vector<std::size_t>> tuples;  // tree indices, lexicographic over N(t)
  std::vector<double> weights;
};

/// Every ordered k-tuple of N(t) with its unnormalised weight. Throws
/// BudgetExceededError if |N(t)|^k exceeds `cap`.
TupleTable enumerate_tuples(const core::MarkedTree& tree, const ContinuousModel& model, double t,
                            std::size_t k, std::size_t cap = 1'000'000);

/// Z^k(t): sum of tuple weights over N(t)^k.
double z_process(const core::MarkedTree& tree, const ContinuousModel& model, double t, std::size_t k,
                 std::size_t cap = 1'000'000);

struct GibbsTable {
  TupleTable table;
  double z = 0.0;
  std::vector<double> probabilities;  // weights / z
};

/// Q^k(xi_t = u | F_t) for every tuple u of N(t)^k.
GibbsTable gibbs_weights(const core::MarkedTree& tree, const ContinuousModel& model, double t, std::size_t k,
                         std::size_t cap = 1'000'000);

}  // namespace spinekit::sim
