#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "spinekit/core/marked_tree.hpp"

namespace spinekit::estimators {

enum class Measurability { spine, full_tree };

/// Y(u_1..u_k). Spine-measurable statistics see the positions of the tuple
/// members at the query time; full-tree statistics see the whole tree.
class Statistic {
 public:
  using Factor = std::function<double(double)>;
  using Terminal = std::function<double(std::span<const double>)>;
  using TreeEvaluator =
      std::function<double(const core::MarkedTree&, std::span<const std::size_t> tuple, double t)>;

  /// Y = 1.
  static Statistic one(std::size_t k);
  /// Y = 1{X_{u_1} > x}, or prod_i 1{X_{u_i} > x} when `every_mark`.
  static Statistic above(std::size_t k, double x, bool every_mark = false);
  /// Y = prod_i 1{X_{u_i} = states[i]} for chain-valued positions.
  static Statistic state_indicators(const std::vector<std::size_t>& states);
  /// Y = prod_i f_i(X_{u_i}).
  static Statistic factored(std::vector<Factor> factors, std::string description, bool nonnegative);
  static Statistic terminal(std::size_t k, Terminal y, std::string description, bool nonnegative);
  static Statistic full_tree(std::size_t k, TreeEvaluator y, std::string description, bool nonnegative);

  std::size_t arity() const noexcept { return arity_; }
  Measurability measurability() const noexcept { return measurability_; }
  bool nonnegative() const noexcept { return nonnegative_; }
  const std::string& description() const noexcept { return description_; }
  bool is_factored() const noexcept { return !factors_.empty(); }
  std::span<const Factor> factors() const noexcept { return factors_; }

  /// Spine-measurable evaluation from the k positions.
  double operator()(std::span<const double> positions) const;
  /// General evaluation; `positions` must hold the tuple members' positions at t.
  double evaluate(const core::MarkedTree* tree, std::span<const std::size_t> tuple,
                  std::span<const double> positions, double t) const;

 private:
  std::size_t arity_ = 1;
  Measurability measurability_ = Measurability::spine;
  bool nonnegative_ = true;
  std::string description_;
  std::vector<Factor> factors_;
  Terminal terminal_;
  TreeEvaluator tree_;
};

}  // namespace spinekit::estimators
