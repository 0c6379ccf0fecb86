#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle {

double integrate(std::function<double(double)> const& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

double integrate_to_inf(std::function<double(double)> const& f, double a) {
  boost::math::quadrature::exp_sinh<double> q;
  return q.integrate([&](double x) { return f(x); }, a, std::numeric_limits<double>::infinity());
}

double normal_pdf(double x) { return boost::math::pdf(boost::math::normal_distribution<>(), x); }
double normal_cdf(double x) { return boost::math::cdf(boost::math::normal_distribution<>(), x); }

double chi_pdf(int n, double r) {
  if (r <= 0.0) return 0.0;
  return 2.0 * r * boost::math::pdf(boost::math::chi_squared_distribution<>(n), r * r);
}

double chi_mean(int n) {
  return integrate_to_inf([n](double r) { return r * chi_pdf(n, r); }, 0.0);
}

double chi_variance(int n) {
  double const m = chi_mean(n);
  return n - m * m;
}

double pnorm_radial_pdf(int n, double p, double r) {
  if (r <= 0.0) return 0.0;
  // u = r^p / p is Gamma(n/p, 1); du/dr = r^{p-1}.
  double const u = std::pow(r, p) / p;
  return boost::math::pdf(boost::math::gamma_distribution<>(n / p, 1.0), u) * std::pow(r, p - 1.0);
}

double pnorm_radial_cdf(int n, double p, double r) {
  if (r <= 0.0) return 0.0;
  return integrate([=](double s) { return pnorm_radial_pdf(n, p, s); }, 0.0, r);
}

double pnorm_sup_density(int n, double p) {
  // f(0) = C with C * |S^{n-1}| * int r^{n-1} e^{-r^p/p} dr = 1.
  double const sphere = n * unit_ball_volume(n);
  double const radial = integrate_to_inf(
      [=](double r) {
        if (!(r > 0.0) || !std::isfinite(r)) return (r == 0.0 && n == 1) ? 1.0 : 0.0;
        return std::exp((n - 1) * std::log(r) - std::pow(r, p) / p);
      },
      0.0);
  return 1.0 / (sphere * radial);
}

double unit_ball_volume(int n) {
  if (n == 0) return 1.0;
  if (n == 1) return 2.0;
  return 2.0 * std::numbers::pi / n * unit_ball_volume(n - 2);
}

double gaussian_tail(double a) {
  return integrate_to_inf([](double s) { return std::exp(-0.5 * s * s); }, a);
}

double brute_force_inradius_2d(maxperim::Polytope const& p, double lo, double hi) {
  // The optimum of max_x min_i (rho_i - <u_i, x>) sits where three constraints
  // are tight; try every triple and keep the best feasible one.
  std::size_t const k = p.facet_count();
  auto depth = [&](double x, double y) {
    double r = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
      auto const th = p.normal(i);
      r = std::min(r, (p.offset(i) - th[0] * x - th[1] * y) / p.normal_norm(i));
    }
    return r;
  };
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      for (std::size_t l = j + 1; l < k; ++l) {
        // rows (u_x, u_y, 1) x = b
        double m[3][4];
        std::size_t const idx[3] = {i, j, l};
        for (int r = 0; r < 3; ++r) {
          auto const th = p.normal(idx[r]);
          double const s = p.normal_norm(idx[r]);
          m[r][0] = th[0] / s;
          m[r][1] = th[1] / s;
          m[r][2] = 1.0;
          m[r][3] = p.offset(idx[r]) / s;
        }
        double const det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        if (std::abs(det) < 1e-12) continue;
        auto col = [&](int c) {
          double a[3][3];
          for (int r = 0; r < 3; ++r)
            for (int q = 0; q < 3; ++q) a[r][q] = q == c ? m[r][3] : m[r][q];
          return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                 a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
        };
        double const x = col(0) / det, y = col(1) / det;
        if (x < lo || x > hi || y < lo || y > hi) continue;
        best = std::max(best, depth(x, y));
      }
  return best;
}

double random_polytope_expected_perimeter(int n, double rho, std::uint64_t facets) {
  auto const conditional_norm = [n](double s) {
    // E sqrt(s^2 + chi_{n-1}^2)
    if (n == 1) return std::abs(s);
    return integrate_to_inf([=](double t) { return std::sqrt(s * s + t * t) * chi_pdf(n - 1, t); }, 0.0);
  };
  auto const integrand = [&](double r) {
    if (r <= 0.0) return 0.0;
    double const s = rho / r;
    double const rate = normal_pdf(s) / r * conditional_norm(s);
    return chi_pdf(n, r) * rate * std::pow(normal_cdf(s), static_cast<double>(facets - 1));
  };
  double const hi = std::sqrt(static_cast<double>(n)) + 12.0;
  return static_cast<double>(facets) * integrate(integrand, 0.0, hi);
}

double ks_distance(std::vector<double> samples, std::function<double(double)> const& cdf) {
  std::sort(samples.begin(), samples.end());
  double const k = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double const f = cdf(samples[i]);
    d = std::max({d, std::abs(f - i / k), std::abs((i + 1) / k - f)});
  }
  return d;
}

}  // namespace oracle
