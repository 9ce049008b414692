#include "spinekit/estimators/statistic.hpp"

#include <stdexcept>

#include "spinekit/core/tree_io.hpp"

namespace spinekit::estimators {

Statistic Statistic::one(std::size_t k) {
  return factored(std::vector<Factor>(k, [](double) { return 1.0; }), "one", true);
}

Statistic Statistic::above(std::size_t k, double x, bool every_mark) {
  if (k == 0) {
    throw std::invalid_argument("statistic arity must be at least 1");
  }
  std::vector<Factor> f(k, [](double) { return 1.0; });
  for (std::size_t i = 0; i < (every_mark ? k : 1); ++i) {
    f[i] = [x](double y) { return y > x ? 1.0 : 0.0; };
  }
  return factored(std::move(f), std::string(every_mark ? "all_above(" : "first_above(") + core::format_real(x) + ")",
                  true);
}

Statistic Statistic::state_indicators(const std::vector<std::size_t>& states) {
  std::vector<Factor> f;
  std::string d = "states(";
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto s = static_cast<double>(states[i]);
    f.emplace_back([s](double y) { return y == s ? 1.0 : 0.0; });
    d += (i ? "," : "") + std::to_string(states[i]);
  }
  return factored(std::move(f), d + ")", true);
}

Statistic Statistic::factored(std::vector<Factor> factors, std::string description, bool nonnegative) {
  if (factors.empty()) {
    throw std::invalid_argument("statistic arity must be at least 1");
  }
  Statistic s;
  s.arity_ = factors.size();
  s.factors_ = std::move(factors);
  s.description_ = std::move(description);
  s.nonnegative_ = nonnegative;
  return s;
}

Statistic Statistic::terminal(std::size_t k, Terminal y, std::string description, bool nonnegative) {
  if (k == 0) {
    throw std::invalid_argument("statistic arity must be at least 1");
  }
  Statistic s;
  s.arity_ = k;
  s.terminal_ = std::move(y);
  s.description_ = std::move(description);
  s.nonnegative_ = nonnegative;
  return s;
}

Statistic Statistic::full_tree(std::size_t k, TreeEvaluator y, std::string description, bool nonnegative) {
  if (k == 0) {
    throw std::invalid_argument("statistic arity must be at least 1");
  }
  Statistic s;
  s.arity_ = k;
  s.measurability_ = Measurability::full_tree;
  s.tree_ = std::move(y);
  s.description_ = std::move(description);
  s.nonnegative_ = nonnegative;
  return s;
}

double Statistic::operator()(std::span<const double> positions) const {
  if (measurability_ == Measurability::full_tree) {
    throw std::logic_error("statistic " + description_ + " needs the full tree");
  }
  if (positions.size() != arity_) {
    throw std::invalid_argument("statistic " + description_ + " expects " + std::to_string(arity_) + " positions");
  }
  if (terminal_) {
    return terminal_(positions);
  }
  double v = 1.0;
  for (std::size_t i = 0; i < arity_; ++i) {
    v *= factors_[i](positions[i]);
  }
  return v;
}

double Statistic::evaluate(const core::MarkedTree* tree, std::span<const std::size_t> tuple,
                           std::span<const double> positions, double t) const {
  if (measurability_ == Measurability::full_tree) {
    if (tree == nullptr) {
      throw std::logic_error("statistic " + description_ + " needs the full tree");
    }
    return tree_(*tree, tuple, t);
  }
  return (*this)(positions);
}

}  // namespace spinekit::estimators
