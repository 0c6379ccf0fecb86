#include "maxperim/special.hpp"

#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

namespace maxperim {

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / kSqrt2Pi; }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double log_unit_ball_volume(int n) {
  double const half = 0.5 * n;
  return half * std::log(std::numbers::pi) - std::lgamma(half + 1.0);
}

double unit_ball_volume(int n) { return std::exp(log_unit_ball_volume(n)); }

double log_unit_sphere_area(int n) { return std::log(static_cast<double>(n)) + log_unit_ball_volume(n); }

double regularized_gamma_p(double a, double x) {
  if (x <= 0.0) return 0.0;
  if (!std::isfinite(x)) return 1.0;
  return boost::math::gamma_p(a, x);
}

}  // namespace maxperim
