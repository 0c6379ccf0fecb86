#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "maxperim/errors.hpp"
#include "maxperim/measures.hpp"
#include "oracles.hpp"

using namespace maxperim;

TEST_CASE("density examples") {
  CHECK(density_at(MeasureSpec::gaussian(1), Vector{0.0}) == doctest::Approx(0.398942).epsilon(1e-6));
  auto const cube = MeasureSpec::uniform(Box::cube(3, 0.5));
  CHECK(density_at(cube, Vector{0.1, -0.2, 0.4}) == doctest::Approx(1.0));
  CHECK(density_at(cube, Vector{0.6, 0.0, 0.0}) == 0.0);
  CHECK(density_at(MeasureSpec::pnorm(2, 2.0), Vector{0.0, 0.0}) == doctest::Approx(1.0 / (2.0 * std::numbers::pi)));
  CHECK_THROWS_AS(density_at(MeasureSpec::gaussian(2), Vector{0.0}), InputError);
}

TEST_CASE("construction errors") {
  CHECK_THROWS_AS(MeasureSpec::pnorm(3, 0.0), InputError);
  CHECK_THROWS_AS(MeasureSpec::pnorm(3, -1.0), InputError);
  CHECK_THROWS_AS(MeasureSpec::gaussian(0), InputError);
  CHECK_THROWS_AS(MeasureSpec::gaussian(2, {}, 0.0), InputError);
  CHECK_THROWS_AS(MeasureSpec::gaussian(2, {1.0}), InputError);
  CHECK_THROWS_AS(MeasureSpec::uniform(Halfspace({1.0, 0.0}, 0.0)), UnsupportedError);
  CHECK_THROWS_AS(gaussian_norm_mean(0), InputError);
  CHECK_THROWS_AS(sample_batch(MeasureSpec::gaussian(2), 0, 1), InputError);
}

TEST_CASE("pnorm normalizer against radial quadrature") {
  for (int n : {1, 2, 3, 6, 10})
    for (double p : {0.5, 1.0, 2.0, 3.0, 7.0}) {
      auto const m = MeasureSpec::pnorm(n, p);
      CHECK(m.sup_density() == doctest::Approx(oracle::pnorm_sup_density(n, p)).epsilon(1e-9));
      CHECK(std::exp(-pnorm_log_inverse_normalizer(n, p)) == doctest::Approx(m.sup_density()).epsilon(1e-12));
    }
}

TEST_CASE("pnorm with p = 2 is the Gaussian") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 2.0);
  for (int n : {1, 2, 5, 30}) {
    auto const a = MeasureSpec::pnorm(n, 2.0), b = MeasureSpec::gaussian(n);
    for (int k = 0; k < 50; ++k) {
      Vector x(n);
      for (double& v : x) v = g(rng);
      CHECK(a.density(x) == doctest::Approx(b.density(x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("density integrates to one") {
  // Riemann sums on [-L, L]^n for n = 1, 2.
  for (auto const& m : {MeasureSpec::gaussian(1), MeasureSpec::pnorm(1, 1.0), MeasureSpec::pnorm(1, 4.0),
                        MeasureSpec::gaussian(1, {0.7}, 1.5)}) {
    double const s = oracle::integrate([&](double x) { return m.density(Vector{x}); }, -40.0, 40.0);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-8));
  }
  for (auto const& m : {MeasureSpec::gaussian(2), MeasureSpec::pnorm(2, 1.0), MeasureSpec::uniform(Ball(2, 1.0))}) {
    double constexpr L = 20.0, h = 0.01;
    int const cells = static_cast<int>(2.0 * L / h);
    Vector x(2);
    double s = 0.0;
    for (int i = 0; i < cells; ++i)
      for (int j = 0; j < cells; ++j) {
        x[0] = -L + (i + 0.5) * h;
        x[1] = -L + (j + 0.5) * h;
        s += m.density(x);
      }
    CHECK(s * h * h == doctest::Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("sampling is deterministic per seed") {
  for (auto const& m : {MeasureSpec::gaussian(3), MeasureSpec::pnorm(4, 1.5), MeasureSpec::uniform(Ball(2, 1.0)),
                        MeasureSpec::uniform(Box({1.0, 2.0}), {3.0, 0.0}, 2.0)}) {
    auto const a = sample_batch(m, 10'000, 42), b = sample_batch(m, 10'000, 42), c = sample_batch(m, 10'000, 43);
    CHECK(a == b);
    CHECK(a != c);
  }
}

TEST_CASE("uniform samples stay in the support") {
  auto const m = MeasureSpec::uniform(Box({1.0, 2.0}, {0.5, 0.5}), {3.0, -1.0}, 2.0);
  auto const support = to_body(*m.support());
  for (auto const& x : sample_batch(m, 20'000, 1)) REQUIRE(contains(support, x));
  auto const ball = MeasureSpec::uniform(Ball(1.5, {1.0, 1.0, 1.0}));
  auto const bs = to_body(*ball.support());
  for (auto const& x : sample_batch(ball, 20'000, 2)) REQUIRE(contains(bs, x));
}

TEST_CASE("Gaussian sample mean norm") {
  auto const xs = sample_batch(MeasureSpec::gaussian(4), 100'000, 9);
  double s = 0.0, s2 = 0.0;
  for (auto const& x : xs) {
    double const r = norm(x);
    s += r;
    s2 += r * r;
  }
  double const k = static_cast<double>(xs.size());
  double const mean = s / k, se = std::sqrt((s2 / k - mean * mean) / k);
  CHECK(std::abs(mean - oracle::chi_mean(4)) < 3.0 * se);
}

TEST_CASE("pnorm radial law matches the quadrature CDF") {
  auto const xs = sample_batch(MeasureSpec::pnorm(3, 1.0), 100'000, 5);
  std::vector<double> radii;
  for (auto const& x : xs) radii.push_back(norm(x));
  CHECK(oracle::ks_distance(radii, [](double r) { return oracle::pnorm_radial_cdf(3, 1.0, r); }) < 0.01);

  auto const ys = sample_batch(MeasureSpec::pnorm(5, 3.0), 50'000, 6);
  std::vector<double> r2;
  for (auto const& y : ys) r2.push_back(norm(y));
  CHECK(oracle::ks_distance(r2, [](double r) { return oracle::pnorm_radial_cdf(5, 3.0, r); }) < 0.015);
}

TEST_CASE("radial statistics") {
  auto const s1 = radial_stats(MeasureSpec::gaussian(1));
  CHECK(s1.method == StatsMethod::closed_form);
  CHECK(s1.mean_norm == doctest::Approx(0.797885).epsilon(1e-6));
  CHECK(s1.var_norm == doctest::Approx(0.363380).epsilon(1e-5));
  CHECK(s1.mean_std_error == 0.0);

  auto const s16 = radial_stats(MeasureSpec::gaussian(16));
  CHECK(s16.mean_norm == doctest::Approx(oracle::chi_mean(16)).epsilon(1e-10));
  CHECK(s16.var_norm == doctest::Approx(oracle::chi_variance(16)).epsilon(1e-8));
  CHECK(s16.mean_norm == doctest::Approx(3.938026).epsilon(1e-6));

  double const e100 = gaussian_norm_mean(100);
  CHECK(e100 >= std::sqrt(99.0));
  CHECK(e100 <= 10.0);
  CHECK(gaussian_norm_mean(2) == doctest::Approx(std::sqrt(std::numbers::pi / 2.0)).epsilon(1e-14));

  for (int n : {1, 2, 3, 10, 100, 1000, 100000}) {
    auto const s = radial_stats(MeasureSpec::gaussian(n));
    CHECK(s.mean_norm * s.mean_norm + s.var_norm == doctest::Approx(n).epsilon(1e-10));
    CHECK(s.var_norm >= 0.0);
  }

  auto const ub = radial_stats(MeasureSpec::uniform(Ball(2, 1.0)), 400'000, 3);
  CHECK(ub.method == StatsMethod::monte_carlo);
  CHECK(std::abs(ub.mean_norm - 2.0 / 3.0) < 4.0 * ub.mean_std_error);
  CHECK(std::abs(ub.var_norm - 1.0 / 18.0) < 4.0 * ub.var_std_error);

  auto const pn = radial_stats(MeasureSpec::pnorm(3, 1.0), 200'000, 4);
  double const mean_ref = oracle::integrate_to_inf([](double r) { return r * oracle::pnorm_radial_pdf(3, 1.0, r); }, 0.0);
  CHECK(std::abs(pn.mean_norm - mean_ref) < 4.0 * pn.mean_std_error);
  CHECK_THROWS_AS(radial_stats(MeasureSpec::pnorm(3, 1.0), 999, 4), InputError);
}

TEST_CASE("radial statistics scale with the measure") {
  auto const g = radial_stats(MeasureSpec::gaussian(5));
  auto const g3 = radial_stats(MeasureSpec::gaussian(5, {}, 3.0));
  CHECK(g3.mean_norm == doctest::Approx(3.0 * g.mean_norm).epsilon(1e-15));
  CHECK(g3.var_norm == doctest::Approx(9.0 * g.var_norm).epsilon(1e-14));

  auto const p = radial_stats(MeasureSpec::pnorm(4, 1.5), 50'000, 8);
  auto const p4 = radial_stats(MeasureSpec::pnorm(4, 1.5, {}, 4.0), 50'000, 8);
  CHECK(p4.mean_norm == doctest::Approx(4.0 * p.mean_norm).epsilon(1e-14));
  CHECK(p4.var_norm == doctest::Approx(16.0 * p.var_norm).epsilon(1e-12));
}

TEST_CASE("most of the mass lies within ten mean norms") {
  for (int n : {1, 2, 4, 8}) {
    for (auto const& m : {MeasureSpec::gaussian(n), MeasureSpec::pnorm(n, 1.0), MeasureSpec::pnorm(n, 3.0),
                          MeasureSpec::uniform(Ball(n, 1.0)), MeasureSpec::uniform(Box::cube(n, 0.5))}) {
      double const r = 10.0 * radial_stats(m, 20'000, 1).mean_norm;
      auto const xs = sample_batch(m, 20'000, 2);
      std::size_t inside = 0;
      for (auto const& x : xs) inside += norm(x) <= r;
      CHECK(static_cast<double>(inside) / xs.size() >= 0.999);
    }
  }
}

TEST_CASE("centered ball mass") {
  for (int n : {1, 3, 8})
    for (double r : {0.5, 1.0, 2.5}) {
      double const ref = oracle::integrate([n](double s) { return oracle::chi_pdf(n, s); }, 0.0, r);
      CHECK(centered_ball_mass(MeasureSpec::gaussian(n), r) == doctest::Approx(ref).epsilon(1e-10));
      CHECK(centered_ball_mass(MeasureSpec::pnorm(n, 1.0), r) == doctest::Approx(oracle::pnorm_radial_cdf(n, 1.0, r)).epsilon(1e-9));
    }
  CHECK(centered_ball_mass(MeasureSpec::uniform(Ball(3, 2.0)), 1.0) == doctest::Approx(0.125));
  CHECK(centered_ball_mass(MeasureSpec::gaussian(2, {}, 2.0), 2.0) ==
        doctest::Approx(centered_ball_mass(MeasureSpec::gaussian(2), 1.0)));
}

TEST_CASE("structural predicates") {
  CHECK(MeasureSpec::gaussian(3).is_log_concave());
  CHECK(MeasureSpec::pnorm(3, 1.0).is_log_concave());
  CHECK_FALSE(MeasureSpec::pnorm(3, 0.5).is_log_concave());
  CHECK(MeasureSpec::gaussian(3).is_isotropic());
  CHECK_FALSE(MeasureSpec::gaussian(3, {}, 2.0).is_isotropic());
  CHECK_FALSE(MeasureSpec::gaussian(2, {1.0, 0.0}).is_ray_decreasing());
  CHECK(MeasureSpec::uniform(Box::cube(2, 1.0)).is_ray_decreasing());
  CHECK(MeasureSpec::uniform(Box::cube(2, 1.0)).is_symmetric());
  CHECK_FALSE(MeasureSpec::uniform(Box({1.0, 1.0}, {0.5, 0.0})).is_symmetric());
  CHECK(MeasureSpec::uniform(Box::cube(3, 0.5)).sup_density() == doctest::Approx(1.0));
  CHECK(MeasureSpec::gaussian(4, {}, 2.0).sup_density() == doctest::Approx(std::pow(2.0 * std::numbers::pi, -2.0) / 16.0));
}
