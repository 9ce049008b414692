#include "spinekit/estimators/closed_forms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "spinekit/core/errors.hpp"
#include "spinekit/stats/kahan.hpp"

namespace spinekit::estimators {

ScalarFunction ScalarFunction::constant_value(double c) {
  ScalarFunction f;
  f.constant = c;
  return f;
}

ScalarFunction ScalarFunction::above(double x) {
  return ScalarFunction{[x](double y) { return y > x ? 1.0 : 0.0; }, {x}, std::nullopt};
}

ScalarFunction ScalarFunction::smooth(std::function<double(double)> f) {
  return ScalarFunction{std::move(f), {}, std::nullopt};
}

namespace {

constexpr double kReach = 12.0;
constexpr unsigned kDepth = 20;

template <class F>
double integrate_pieces(F&& f, std::vector<double> cuts, double tolerance) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  KahanSum total;
  double error = 0.0;
  double mass = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double e = 0.0;
    double l1 = 0.0;
    total += Rule::integrate(f, cuts[i], cuts[i + 1], kDepth, tolerance, &e, &l1);
    error += e;
    mass += l1;
  }
  if (!std::isfinite(total.value()) || error > 100.0 * tolerance * mass + 1e-16) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "quadrature error estimate %.3g exceeds tolerance %.3g (L1 mass %.3g)", error,
                  tolerance, mass);
    throw QuadratureError(buf);
  }
  return total.value();
}

double standard_normal_density(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace

double gaussian_expectation(const ScalarFunction& h, double mean, double sd, double relative_tolerance) {
  if (h.constant) {
    return *h.constant;
  }
  if (sd == 0.0) {
    return h(mean);
  }
  if (!(sd > 0.0)) {
    throw std::invalid_argument("standard deviation must be nonnegative");
  }
  std::vector<double> cuts{-kReach, kReach};
  for (const double b : h.breakpoints) {
    const double z = (b - mean) / sd;
    if (z > -kReach && z < kReach) {
      cuts.push_back(z);
    }
  }
  return integrate_pieces([&](double z) { return h(mean + sd * z) * standard_normal_density(z); }, cuts,
                          relative_tolerance);
}

double many_to_one_closed_form(const ScalarFunction& f, double t, double relative_tolerance) {
  if (!(t >= 0.0)) {
    throw std::invalid_argument("t must be nonnegative");
  }
  return std::exp(t) * gaussian_expectation(f, 0.0, std::sqrt(t), relative_tolerance);
}

double many_to_two_closed_form(const ScalarFunction& f, const ScalarFunction& g, double t,
                               double relative_tolerance) {
  if (!(t >= 0.0)) {
    throw std::invalid_argument("t must be nonnegative");
  }
  if (t == 0.0) {
    return f(0.0) * g(0.0);
  }
  const double inner_tol = std::max(relative_tolerance / 100.0, 1e-14);
  const double middle_tol = std::max(relative_tolerance / 10.0, 1e-13);

  ScalarFunction fg{[&](double y) { return f(y) * g(y); }, f.breakpoints, std::nullopt};
  fg.breakpoints.insert(fg.breakpoints.end(), g.breakpoints.begin(), g.breakpoints.end());
  if (f.constant && g.constant) {
    fg = ScalarFunction::constant_value(*f.constant * *g.constant);
  }
  const double unsplit = gaussian_expectation(fg, 0.0, std::sqrt(t), inner_tol);

  // E_s = E[F_{t-s}(B_s) G_{t-s}(B_s)], F_u(z) = E[f(z + W_u)].
  auto coupled = [&](double s) {
    const double rest = std::sqrt(t - s);
    ScalarFunction product{[&](double z) {
                             return gaussian_expectation(f, z, rest, inner_tol) *
                                    gaussian_expectation(g, z, rest, inner_tol);
                           },
                           fg.breakpoints, std::nullopt};
    if (f.constant && g.constant) {
      product = fg;
    }
    return gaussian_expectation(product, 0.0, std::sqrt(s), middle_tol);
  };
  // s = t - u^2 removes the square-root behaviour of E_s as s -> t.
  const double split = integrate_pieces(
      [&](double u) {
        const double s = t - u * u;
        return 4.0 * u * std::exp(-s) * coupled(s);
      },
      {0.0, std::sqrt(t)}, relative_tolerance);
  return std::exp(2.0 * t) * (split + std::exp(-t) * unsplit);
}

double tail_upper_bound(double x, double t) {
  if (!(t > 0.0)) {
    throw std::invalid_argument("t must be positive");
  }
  return std::exp(t) * 0.5 * std::erfc(x / std::sqrt(2.0 * t));
}

double tail_lower_bound(double x, double t) {
  if (!(t > 0.0)) {
    throw std::invalid_argument("t must be positive");
  }
  const auto f = ScalarFunction::above(x);
  const double first = many_to_one_closed_form(f, t);
  const double second = many_to_two_closed_form(f, f, t);
  return second > 0.0 ? first * first / second : 0.0;
}

}  // namespace spinekit::estimators
