#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace spinekit::estimators {

/// Real function of position with its jump locations declared so that
/// quadrature never straddles a discontinuity.
struct ScalarFunction {
  std::function<double(double)> eval;
  std::vector<double> breakpoints;
  std::optional<double> constant;

  static ScalarFunction constant_value(double c);
  static ScalarFunction one() { return constant_value(1.0); }
  /// 1{y > x}.
  static ScalarFunction above(double x);
  static ScalarFunction smooth(std::function<double(double)> f);

  double operator()(double y) const { return constant ? *constant : eval(y); }
};

/// E[h(mean + sd Z)] for standard normal Z by adaptive Gauss-Kronrod on
/// [-12, 12] in standardised coordinates, split at the breakpoints of h.
/// Throws QuadratureError if the error estimate misses the tolerance.
double gaussian_expectation(const ScalarFunction& h, double mean, double sd, double relative_tolerance);

/// e^t E[f(B_t)]: mean of sum_{u in N(t)} f(X_u(t)) for binary BBM with R = 1.
double many_to_one_closed_form(const ScalarFunction& f, double t, double relative_tolerance = 1e-10);

/// e^{2t} E[e^{T ^ t} f(B_t) g(B'_t)], T ~ Exp(2), B' = B_T + W_{t-T}: mean of
/// sum_{u,v in N(t)} f(X_u(t)) g(X_v(t)) for binary BBM with R = 1.
double many_to_two_closed_form(const ScalarFunction& f, const ScalarFunction& g, double t,
                               double relative_tolerance = 1e-8);

/// e^t P(B_t > x), the mean number of particles above x at time t.
double tail_upper_bound(double x, double t);

/// E[A]^2 / E[A^2] for A the number of particles above x at time t.
double tail_lower_bound(double x, double t);

}  // namespace spinekit::estimators
