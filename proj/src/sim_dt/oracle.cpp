#include "spinekit/sim_dt/oracle.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "spinekit/core/errors.hpp"
#include "spinekit/stats/kahan.hpp"

namespace spinekit::discrete {

StateStatistic StateStatistic::one(std::size_t k, std::size_t states) {
  return StateStatistic{std::vector<std::vector<double>>(k, std::vector<double>(states, 1.0))};
}

StateStatistic StateStatistic::indicators(const std::vector<std::size_t>& target, std::size_t states) {
  StateStatistic s;
  for (const auto t : target) {
    if (t >= states) {
      throw std::invalid_argument("indicator state out of range");
    }
    std::vector<double> f(states, 0.0);
    f[t] = 1.0;
    s.factors.push_back(std::move(f));
  }
  return s;
}

double StateStatistic::operator()(std::span<const std::size_t> states) const {
  double v = 1.0;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    v *= factors[i].at(states[i]);
  }
  return v;
}

std::string StateStatistic::describe() const {
  bool ones = true;
  std::string ind;
  for (const auto& f : factors) {
    std::size_t hits = 0;
    std::size_t where = 0;
    for (std::size_t s = 0; s < f.size(); ++s) {
      ones = ones && f[s] == 1.0;
      if (f[s] == 1.0) {
        ++hits;
        where = s;
      } else if (f[s] != 0.0) {
        hits = 2;
      }
    }
    ind += (ind.empty() ? "" : ",") + (hits == 1 ? std::to_string(where) : std::string("*"));
  }
  if (ones) {
    return "one";
  }
  return "states(" + ind + ")";
}

namespace {

void check_shape(const DiscreteModel& model, const StateStatistic& y) {
  model.validate();
  if (y.factors.size() != model.k) {
    throw std::invalid_argument("statistic arity differs from k");
  }
  for (const auto& f : y.factors) {
    if (f.size() != model.chain.states()) {
      throw std::invalid_argument("statistic factor has the wrong number of states");
    }
  }
}

// Sparse law of the vector of per-state particle counts.
using Counts = std::vector<std::uint32_t>;
using CountLaw = std::map<Counts, double>;

class Work {
 public:
  explicit Work(std::size_t budget) : budget_(budget) {}
  void spend(std::size_t units) {
    used_ += units;
    if (used_ > budget_) {
      throw BudgetExceededError("exact enumeration exceeds its budget of " + std::to_string(budget_) + " leaves");
    }
  }

 private:
  std::size_t budget_;
  std::size_t used_ = 0;
};

CountLaw convolve(const CountLaw& a, const CountLaw& b, Work& work) {
  work.spend(a.size() * b.size());
  CountLaw out;
  for (const auto& [ca, pa] : a) {
    for (const auto& [cb, pb] : b) {
      Counts c = ca;
      for (std::size_t s = 0; s < c.size(); ++s) {
        c[s] += cb[s];
      }
      out[c] += pa * pb;
    }
  }
  return out;
}

}  // namespace

double oracle_lhs(const DiscreteModel& model, const StateStatistic& y, std::size_t budget) {
  check_shape(model, y);
  const std::size_t states = model.chain.states();
  const auto& p = model.chain.kernel();
  const auto pmf = model.law.pmf();
  Work work(budget);

  std::vector<CountLaw> level(states);
  for (std::size_t s = 0; s < states; ++s) {
    Counts c(states, 0);
    c[s] = 1;
    level[s][c] = 1.0;
  }
  for (std::uint32_t r = 1; r <= model.generations; ++r) {
    std::vector<CountLaw> next(states);
    for (std::size_t s = 0; s < states; ++s) {
      // Law of the counts below one child of a particle at s.
      CountLaw child;
      for (std::size_t z = 0; z < states; ++z) {
        if (p[s][z] == 0.0) {
          continue;
        }
        for (const auto& [c, q] : level[z]) {
          child[c] += p[s][z] * q;
        }
      }
      CountLaw power{{Counts(states, 0), 1.0}};
      for (std::size_t a = 0; a < pmf.size(); ++a) {
        if (a > 0) {
          power = convolve(power, child, work);
        }
        if (pmf[a] == 0.0) {
          continue;
        }
        for (const auto& [c, q] : power) {
          next[s][c] += pmf[a] * q;
        }
      }
    }
    level = std::move(next);
  }

  std::vector<std::vector<double>> g = y.factors;
  for (auto& f : g) {
    for (std::size_t s = 0; s < states; ++s) {
      if (!zeta_positive_dt(model.chain, s)) {
        f[s] = 0.0;
      }
    }
  }
  const auto& final_law = level[model.initial_state];
  work.spend(final_law.size());
  KahanSum total;
  for (const auto& [c, q] : final_law) {
    double v = q;
    for (const auto& f : g) {
      double sum = 0.0;
      for (std::size_t s = 0; s < states; ++s) {
        sum += f[s] * static_cast<double>(c[s]);
      }
      v *= sum;
    }
    total += v;
  }
  return total.value();
}

namespace {

class SkeletonEnumerator {
 public:
  SkeletonEnumerator(const DiscreteModel& model, const StateStatistic& y, MomentConvention convention,
                     std::size_t budget)
      : model_(model), y_(y), convention_(convention), work_(budget) {
    for (std::uint32_t j = 1; j <= model.k; ++j) {
      biased_.push_back(model.law.size_biased(j));
    }
  }

  double value(std::size_t state, std::uint32_t marks, std::uint32_t remaining) {
    const auto key = encode(state, marks, remaining);
    if (auto it = memo_.find(key); it != memo_.end()) {
      return it->second;
    }
    const double v = remaining == 0 ? leaf(state, marks) : branch(state, marks, remaining);
    memo_.emplace(key, v);
    return v;
  }

 private:
  std::uint64_t encode(std::size_t state, std::uint32_t marks, std::uint32_t remaining) const {
    return (static_cast<std::uint64_t>(state) << 40) | (static_cast<std::uint64_t>(marks) << 8) | remaining;
  }

  double leaf(std::size_t state, std::uint32_t marks) {
    work_.spend(1);
    if (!zeta_positive_dt(model_.chain, state)) {
      return 0.0;
    }
    double v = 1.0;
    for (std::size_t i = 0; i < model_.k; ++i) {
      if (marks & (1U << i)) {
        v *= y_.factors[i][state];
      }
    }
    return v;
  }

  // Expected weighted value of one spine child receiving `marks` from a parent at `state`.
  double child(std::size_t state, std::uint32_t marks, std::uint32_t remaining) {
    const auto& tilted = model_.chain.tilted_kernel();
    KahanSum sum;
    for (std::size_t z = 0; z < tilted.size(); ++z) {
      if (tilted[state][z] == 0.0) {
        continue;
      }
      const double edge = 1.0 / model_.chain.step_ratio(state, z);
      sum += tilted[state][z] * edge * value(z, marks, remaining);
    }
    return sum.value();
  }

  double branch(std::size_t state, std::uint32_t marks, std::uint32_t remaining) {
    std::vector<std::size_t> ids;
    for (std::size_t i = 0; i < model_.k; ++i) {
      if (marks & (1U << i)) {
        ids.push_back(i);
      }
    }
    const auto j = static_cast<std::uint32_t>(ids.size());
    const double m = model_.law.moment(j);
    const auto pmf = biased_[j - 1].pmf();
    KahanSum total;
    for (std::uint32_t a = 1; a < pmf.size(); ++a) {
      if (pmf[a] == 0.0) {
        continue;
      }
      const double pick = std::pow(static_cast<double>(a), -static_cast<double>(j));
      std::vector<std::uint32_t> choice(j, 0);
      for (;;) {
        work_.spend(1);
        std::vector<std::uint32_t> per_child(a, 0);
        for (std::uint32_t i = 0; i < j; ++i) {
          per_child[choice[i]] |= 1U << ids[i];
        }
        double v = pmf[a] * pick;
        for (const auto sub : per_child) {
          if (sub != 0) {
            v *= child(state, sub, remaining - 1);
            if (convention_ == MomentConvention::per_edge) {
              v *= m;
            }
          }
        }
        total += v;
        std::uint32_t pos = j;
        while (pos > 0 && ++choice[pos - 1] == a) {
          choice[pos - 1] = 0;
          --pos;
        }
        if (pos == 0) {
          break;
        }
      }
    }
    return convention_ == MomentConvention::per_node ? m * total.value() : total.value();
  }

  const DiscreteModel& model_;
  const StateStatistic& y_;
  MomentConvention convention_;
  Work work_;
  std::vector<laws::OffspringLaw> biased_;
  std::unordered_map<std::uint64_t, double> memo_;
};

}  // namespace

double oracle_rhs(const DiscreteModel& model, const StateStatistic& y, MomentConvention convention,
                  std::size_t budget) {
  check_shape(model, y);
  if (model.k > 24) {
    throw std::invalid_argument("oracle supports at most 24 marks");
  }
  SkeletonEnumerator e(model, y, convention, budget);
  const std::uint32_t all = (1U << model.k) - 1U;
  return e.value(model.initial_state, all, model.generations);
}

}  // namespace spinekit::discrete
