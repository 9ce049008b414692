#include "spinekit/laws/finite_chain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "spinekit/core/tree_io.hpp"

namespace spinekit::laws {

PerronPair perron_pair(const Matrix& m, double tolerance, std::size_t max_iterations) {
  const std::size_t n = m.size();
  if (n == 0) {
    throw std::invalid_argument("Perron pair of an empty matrix");
  }
  for (const auto& row : m) {
    if (row.size() != n) {
      throw std::invalid_argument("Perron pair needs a square matrix");
    }
    for (double v : row) {
      if (!(v >= 0.0)) {
        throw std::invalid_argument("Perron pair needs a nonnegative matrix");
      }
    }
  }
  std::vector<double> h(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  auto iterate = [&] {
    for (std::size_t i = 0; i < n; ++i) {
      double s = h[i];  // the +I shift
      for (std::size_t j = 0; j < n; ++j) {
        s += m[i][j] * h[j];
      }
      next[i] = s;
    }
    const double total = std::accumulate(next.begin(), next.end(), 0.0);
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] /= total;
      diff = std::max(diff, std::abs(next[i] - h[i]));
    }
    h.swap(next);
    return diff;
  };
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    double diff = iterate();
    if (diff < tolerance) {
      // keep going while the iterates still move, down to rounding level
      for (std::size_t extra = 0; diff > 0.0 && it < max_iterations; ++extra, ++it) {
        const double d = iterate();
        if (d >= diff && extra > 8) {
          break;
        }
        diff = d;
      }
      double mh = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          mh += m[i][j] * h[j];
        }
      }
      return {mh / std::accumulate(h.begin(), h.end(), 0.0), h, it};
    }
  }
  throw std::runtime_error("power iteration did not converge");
}

FiniteChain::FiniteChain(Matrix kernel, ChainClock clock, double tilt, std::vector<double> potential)
    : kernel_(std::move(kernel)), clock_(clock), tilt_(tilt), potential_(std::move(potential)) {
  const std::size_t n = kernel_.size();
  if (n == 0) {
    throw std::invalid_argument("chain needs at least one state");
  }
  for (const auto& row : kernel_) {
    if (row.size() != n) {
      throw std::invalid_argument("chain kernel must be square");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = kernel_[i][j];
      if (!std::isfinite(v) || ((clock_ == ChainClock::discrete || i != j) && v < 0.0)) {
        throw std::invalid_argument("chain kernel has an invalid entry");
      }
      total += v;
    }
    const double target = clock_ == ChainClock::discrete ? 1.0 : 0.0;
    if (std::abs(total - target) > 1e-12) {
      throw std::invalid_argument(clock_ == ChainClock::discrete
                                      ? "transition matrix rows must sum to 1"
                                      : "rate matrix rows must sum to 0");
    }
  }
  if (potential_.empty()) {
    potential_.resize(n);
    std::iota(potential_.begin(), potential_.end(), 0.0);
  }
  if (potential_.size() != n) {
    throw std::invalid_argument("tilt potential has the wrong length");
  }

  Matrix shifted(n, std::vector<double>(n, 0.0));
  double shift = 0.0;
  if (clock_ == ChainClock::discrete) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        shifted[i][j] = kernel_[i][j] * std::exp(tilt_ * potential_[j]);
      }
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      shift = std::max(shift, -(kernel_[i][i] + tilt_ * potential_[i]));
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        shifted[i][j] = kernel_[i][j] + (i == j ? tilt_ * potential_[i] + shift : 0.0);
      }
    }
  }
  if (tilt_ == 0.0) {
    perron_ = {1.0, std::vector<double>(n, 1.0), 0};
    if (clock_ == ChainClock::continuous) {
      perron_.root = 0.0;
    }
  } else {
    perron_ = perron_pair(shifted);
    perron_.root -= shift;
  }

  tilted_ = kernel_;
  const auto& h = perron_.vector;
  for (std::size_t i = 0; i < n; ++i) {
    if (h[i] <= 0.0) {
      continue;  // zeta is zero from here on; the tilted chain never visits i
    }
    if (clock_ == ChainClock::discrete) {
      for (std::size_t j = 0; j < n; ++j) {
        tilted_[i][j] = kernel_[i][j] * std::exp(tilt_ * potential_[j]) * h[j] / (perron_.root * h[i]);
      }
    } else {
      double out = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) {
          tilted_[i][j] = kernel_[i][j] * h[j] / h[i];
          out += tilted_[i][j];
        }
      }
      tilted_[i][i] = -out;
    }
  }
}

std::size_t FiniteChain::sample_row(const std::vector<double>& row, std::size_t skip, double total,
                                    Rng& rng) const {
  std::uniform_real_distribution<double> u(0.0, total);
  double x = u(rng);
  std::size_t last = skip;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (j == skip || row[j] <= 0.0) {
      continue;
    }
    last = j;
    if (x < row[j]) {
      return j;
    }
    x -= row[j];
  }
  return last;
}

std::size_t FiniteChain::step(std::size_t from, Rng& rng, bool tilted) const {
  if (clock_ != ChainClock::discrete) {
    throw std::logic_error("step() needs a discrete-time chain");
  }
  const auto& row = (tilted ? tilted_ : kernel_).at(from);
  const double total = std::accumulate(row.begin(), row.end(), 0.0);
  return sample_row(row, row.size(), total, rng);
}

double FiniteChain::step_ratio(std::size_t from, std::size_t to) const {
  const auto& h = perron_.vector;
  if (h[from] <= 0.0) {
    return 0.0;
  }
  return std::exp(tilt_ * potential_[to]) * h[to] / (perron_.root * h[from]);
}

double FiniteChain::exit_rate(std::size_t state, bool tilted) const {
  return -(tilted ? tilted_ : kernel_).at(state).at(state);
}

std::size_t FiniteChain::jump(std::size_t from, Rng& rng, bool tilted) const {
  if (clock_ != ChainClock::continuous) {
    throw std::logic_error("jump() needs a continuous-time chain");
  }
  const auto& row = (tilted ? tilted_ : kernel_).at(from);
  return sample_row(row, from, -row[from], rng);
}

double FiniteChain::holding_ratio(std::size_t state, double dt) const {
  if (tilt_ == 0.0) {
    return 1.0;
  }
  return std::exp((tilt_ * potential_[state] - perron_.root) * dt);
}

double FiniteChain::jump_ratio(std::size_t from, std::size_t to) const {
  const auto& h = perron_.vector;
  return h[from] > 0.0 ? h[to] / h[from] : 0.0;
}

std::string FiniteChain::describe() const {
  std::ostringstream os;
  os << (clock_ == ChainClock::discrete ? "P" : "G") << '[';
  for (std::size_t i = 0; i < kernel_.size(); ++i) {
    os << (i ? ";" : "");
    for (std::size_t j = 0; j < kernel_.size(); ++j) {
      os << (j ? "," : "") << core::format_real(kernel_[i][j]);
    }
  }
  os << ']';
  if (tilt_ != 0.0) {
    os << " tilt=" << core::format_real(tilt_);
  }
  return os.str();
}

}  // namespace spinekit::laws
