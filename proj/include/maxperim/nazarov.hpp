#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "maxperim/bodies.hpp"
#include "maxperim/measures.hpp"
#include "maxperim/perimeter.hpp"

namespace maxperim {

// Default for the unnamed absolute constant of the general annulus bound and
// its corollary. It is the small-alpha limit of the random-polytope constant
// and is a convention, not a derived value.
inline constexpr double kDefaultAnnulusConstant = 0.06;

// Parameters of the random polytope  Q = { y : <Y_i, y> <= rho, i = 1..N }
// with i.i.d. standard Gaussian Y_i.
struct NazarovParams {
  double beta = 0.0;
  double w = 0.0;              // W / E|X|
  double rho = 0.0;
  std::uint64_t facets = 0;    // N
  double expected_norm = 0.0;  // E|X|
  double norm_sd = 0.0;        // W = sqrt(Var|X|)
  double alpha = 0.0;
  bool degenerate = false;     // w was clamped or N saturated
};

// (1 - 1/beta^2) sqrt((1 - (beta alpha)^2) / beta): the beta-dependent part of
// the lower-bound constant.
double beta_objective(double alpha, double beta);

// Maximizer of beta_objective over (1, 1/alpha): 64-point log grid, then
// golden-section refinement around the best grid cell.
double optimal_beta(double alpha);

// 1/(2 e sqrt(e)) * beta_objective(alpha, beta) / (1 + alpha)^2.
double lower_bound_constant(double alpha, double beta);
double optimized_lower_bound_constant(double alpha);

// rho = 1/2 sqrt((1 - (beta w)^2) / beta) * E / sqrt(w).
double nazarov_rho(double expected_norm, double w, double beta);

NazarovParams make_params(RadialStats const& stats, double alpha, std::optional<double> beta = std::nullopt);

// q = (E + beta W) / (sqrt(2 pi) rho) * exp(-rho^2 / (2 (E + beta W)^2)), the
// Mills-ratio bound on P(<X, Y> > rho) at |X| = E + beta W.
double facet_miss_bound(NazarovParams const& params);
// N (1 - q)^{N-1}; the construction asks for this to be at least 1/e.
double expon_product(NazarovParams const& params);
// -rho^2 / (2 (E - beta W)^2) + rho^2 / (2 (E + beta W)^2); asked to be >= -1/2.
double comp_exponent_gap(NazarovParams const& params);
// The same gap after substituting rho: -1 / (2 (1 - (beta w)^2)).
double comp_exponent_gap_reduced(double w, double beta);

// int_a^inf exp(-s^2/2) ds and its Mills-ratio upper bound exp(-a^2/2) / a.
double gaussian_tail_integral(double a);
double mills_bound(double a);

// N facets with i.i.d. standard Gaussian normals and common offset rho.
Polytope build_polytope(NazarovParams const& params, int n, std::uint64_t seed);

// Lower bound on E_Y mu^+(dQ) for the random polytope with optimized beta,
// with the asymptotic (1 + o(1)) sqrt(n) replaced by the exact E|Y|.
double analytic_lower_bound(RadialStats const& stats, double alpha, int n);

// C (1 - delta) sqrt(n) / (b sqrt((b/a)^2 - 1)) for a measure putting mass
// >= 1 - delta on the annulus a <= |X + y| <= b.
double theorem_general_bound(double a, double b, double delta, int n, double c = kDefaultAnnulusConstant);

struct CorollaryBound {
  double value = 0.0;
  std::size_t best_index = 0;
  double inner_radius = 0.0;              // a
  std::vector<double> outer_radii;        // b = 4 E|X + y| per candidate
  std::vector<double> candidate_values;
};

// max over candidate shifts y of C (1 - delta) sqrt(n) a / b^2, with a fixed by
// ||f||_inf |B_2^n| a^n = 1/4 and b = 4 E|X + y|.
CorollaryBound corollary_bound(MeasureSpec const& m, std::vector<Vector> const& shift_candidates,
                               std::size_t budget = 200'000, std::uint64_t seed = 0,
                               double c = kDefaultAnnulusConstant, double delta = 0.5);

struct NazarovOptions {
  std::optional<double> beta;
  double eps = 0.0;  // 0 selects default_eps(m)
  std::size_t stats_budget = 200'000;
};

struct NazarovRun {
  RadialStats stats;
  NazarovParams params;
  std::vector<double> trial_values;
  std::vector<double> trial_std_errors;
  PerimeterEstimate estimate;  // mean and standard error over trials
};

// Radial statistics as computed inside run_nazarov_trials for this seed.
RadialStats trial_stats(MeasureSpec const& m, std::uint64_t seed, std::size_t budget = 200'000);

NazarovRun run_nazarov_trials(MeasureSpec const& m, double alpha, std::size_t trials, std::size_t samples,
                              std::uint64_t seed, NazarovOptions const& options = {});

PerimeterEstimate empirical_nazarov_perimeter(MeasureSpec const& m, double alpha, std::size_t trials,
                                              std::size_t samples, std::uint64_t seed,
                                              NazarovOptions const& options = {});

// C sqrt(n) / (var_bound^{1/4} n^{1/4}): the lower bound with E|X| = sqrt(n).
double thin_shell_observation(int n, double var_bound, double c = kDefaultAnnulusConstant);

}  // namespace maxperim
