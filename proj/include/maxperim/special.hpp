#pragma once

#include <numbers>

namespace maxperim {

inline constexpr double kSqrt2Pi = 2.5066282746310002;  // sqrt(2*pi)

double normal_pdf(double x);
double normal_cdf(double x);

// log of the volume of the unit Euclidean ball in R^n.
double log_unit_ball_volume(int n);
double unit_ball_volume(int n);
// log of the (n-1)-dimensional area of the unit sphere S^{n-1}.
double log_unit_sphere_area(int n);

// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);

}  // namespace maxperim
