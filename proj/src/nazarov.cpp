#include "maxperim/nazarov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "maxperim/errors.hpp"
#include "maxperim/special.hpp"

namespace maxperim {

namespace {

constexpr double kMinW = 1e-8;
constexpr double kBetaMargin = 1e-6;
// Facet counts beyond this are reported as degenerate rather than built.
constexpr double kMaxFacets = 1e9;

double e_sqrt_e() { return std::numbers::e * std::sqrt(std::numbers::e); }

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
}

void check_hypothesis(RadialStats const& stats, double alpha) {
  double const w_sd = stats.norm_sd();
  if (!(stats.mean_norm > 0.0)) throw PreconditionError("E|X| must be positive");
  if (w_sd > alpha * stats.mean_norm * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "hypothesis sqrt(Var|X|) <= alpha * E|X| violated: " << w_sd << " > " << alpha << " * "
       << stats.mean_norm;
    throw PreconditionError(os.str());
  }
}

}  // namespace

double beta_objective(double alpha, double beta) {
  double const t = 1.0 - (beta * alpha) * (beta * alpha);
  if (t <= 0.0 || beta <= 1.0) return 0.0;
  return (1.0 - 1.0 / (beta * beta)) * std::sqrt(t / beta);
}

double optimal_beta(double alpha) {
  check_alpha(alpha);
  double const lo = 1.0 + kBetaMargin;
  double const hi = 1.0 / alpha - kBetaMargin;
  if (!(hi > lo)) throw InputError("optimal_beta: empty interval (1, 1/alpha)");

  constexpr int kGrid = 64;
  double const log_lo = std::log(lo), log_hi = std::log(hi);
  auto grid = [&](int k) { return std::exp(log_lo + (log_hi - log_lo) * k / (kGrid - 1)); };
  int best = 0;
  double best_value = -1.0;
  for (int k = 0; k < kGrid; ++k) {
    double const v = beta_objective(alpha, grid(k));
    if (v > best_value) {
      best_value = v;
      best = k;
    }
  }
  double a = grid(std::max(0, best - 1));
  double b = grid(std::min(kGrid - 1, best + 1));
  double const inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = beta_objective(alpha, c), fd = beta_objective(alpha, d);
  for (int iter = 0; iter < 200 && (b - a) > 1e-12 * b; ++iter) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = beta_objective(alpha, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = beta_objective(alpha, d);
    }
  }
  double const refined = 0.5 * (a + b);
  return beta_objective(alpha, refined) >= best_value ? refined : grid(best);
}

double lower_bound_constant(double alpha, double beta) {
  return beta_objective(alpha, beta) / (2.0 * e_sqrt_e()) / ((1.0 + alpha) * (1.0 + alpha));
}

double optimized_lower_bound_constant(double alpha) { return lower_bound_constant(alpha, optimal_beta(alpha)); }

double nazarov_rho(double expected_norm, double w, double beta) {
  return 0.5 * std::sqrt((1.0 - (beta * w) * (beta * w)) / beta) * expected_norm / std::sqrt(w);
}

NazarovParams make_params(RadialStats const& stats, double alpha, std::optional<double> beta) {
  check_alpha(alpha);
  check_hypothesis(stats, alpha);

  NazarovParams p;
  p.alpha = alpha;
  p.expected_norm = stats.mean_norm;
  p.w = stats.norm_sd() / stats.mean_norm;
  if (p.w < kMinW) {
    p.w = kMinW;
    p.degenerate = true;
  }
  p.norm_sd = p.w * p.expected_norm;
  if (beta) {
    if (!(*beta > 1.0 && *beta < 1.0 / alpha)) throw InputError("make_params: beta must lie in (1, 1/alpha)");
    p.beta = *beta;
  } else {
    p.beta = optimal_beta(alpha);
  }
  p.rho = nazarov_rho(p.expected_norm, p.w, p.beta);

  double const spread = p.expected_norm + p.beta * p.norm_sd;
  double const x = p.rho / spread;
  double const inner = kSqrt2Pi * x * std::exp(0.5 * x * x) + 1.0;
  double const count = std::floor(inner) + 1.0;
  if (!std::isfinite(count) || count > kMaxFacets) {
    p.facets = static_cast<std::uint64_t>(kMaxFacets);
    p.degenerate = true;
  } else {
    p.facets = static_cast<std::uint64_t>(count);
  }
  return p;
}

double facet_miss_bound(NazarovParams const& p) {
  double const spread = p.expected_norm + p.beta * p.norm_sd;
  double const x = p.rho / spread;
  return std::exp(-0.5 * x * x) / (kSqrt2Pi * x);
}

double expon_product(NazarovParams const& p) {
  double const q = facet_miss_bound(p);
  double const n = static_cast<double>(p.facets);
  if (q < 1.0) return n * std::exp((n - 1.0) * std::log1p(-q));
  return n * std::pow(1.0 - q, n - 1.0);
}

double comp_exponent_gap(NazarovParams const& p) {
  double const lo = p.expected_norm - p.beta * p.norm_sd;
  double const hi = p.expected_norm + p.beta * p.norm_sd;
  double const r2 = p.rho * p.rho;
  return -r2 / (2.0 * lo * lo) + r2 / (2.0 * hi * hi);
}

double comp_exponent_gap_reduced(double w, double beta) {
  return -0.5 / (1.0 - (beta * w) * (beta * w));
}

double gaussian_tail_integral(double a) {
  return std::sqrt(std::numbers::pi / 2.0) * std::erfc(a / std::numbers::sqrt2);
}

double mills_bound(double a) {
  if (!(a > 0.0)) throw InputError("mills_bound: a must be positive");
  return std::exp(-0.5 * a * a) / a;
}

Polytope build_polytope(NazarovParams const& params, int n, std::uint64_t seed) {
  if (n < 1) throw InputError("build_polytope: n must be positive");
  if (params.facets < 1) throw InputError("build_polytope: facet count must be positive");
  if (static_cast<double>(params.facets) * n > 5e8)
    throw InputError("build_polytope: facet count too large to materialize (degenerate parameters)");
  Engine rng = substream(seed, StreamTag::polytope, 0);
  std::normal_distribution<double> normal;
  std::vector<Halfspace> facets;
  facets.reserve(params.facets);
  for (std::uint64_t i = 0; i < params.facets; ++i) {
    Vector theta(static_cast<std::size_t>(n));
    for (double& v : theta) v = normal(rng);
    facets.emplace_back(std::move(theta), params.rho);
  }
  return Polytope(facets);
}

double analytic_lower_bound(RadialStats const& stats, double alpha, int n) {
  check_alpha(alpha);
  check_hypothesis(stats, alpha);
  if (n < 1) throw InputError("analytic_lower_bound: n must be positive");
  double const sd = std::max(stats.norm_sd(), kMinW * stats.mean_norm);
  double const constant = optimized_lower_bound_constant(alpha);
  // (1 + o(1)) sqrt(n) -> E|Y| for Y standard Gaussian in R^n.
  return constant * gaussian_norm_mean(n) / (std::sqrt(stats.mean_norm) * std::sqrt(sd));
}

double theorem_general_bound(double a, double b, double delta, int n, double c) {
  if (!(a > 0.0)) throw InputError("theorem_general_bound: a must be positive");
  if (!(a < b)) throw InputError("theorem_general_bound: requires a < b");
  if (!(delta >= 0.0 && delta <= 1.0)) throw InputError("theorem_general_bound: delta must lie in [0, 1]");
  if (!(c > 0.0)) throw InputError("theorem_general_bound: C must be positive");
  if (n < 1) throw InputError("theorem_general_bound: n must be positive");
  double const ratio = b / a;
  double const root = std::sqrt((ratio - 1.0) * (ratio + 1.0));
  if (root == 0.0) return std::numeric_limits<double>::infinity();
  return c * (1.0 - delta) * std::sqrt(static_cast<double>(n)) / (b * root);
}

CorollaryBound corollary_bound(MeasureSpec const& m, std::vector<Vector> const& shift_candidates,
                               std::size_t budget, std::uint64_t seed, double c, double delta) {
  if (shift_candidates.empty()) throw InputError("corollary_bound: candidate list is empty");
  if (!(delta >= 0.0 && delta <= 1.0)) throw InputError("corollary_bound: delta must lie in [0, 1]");
  int const n = m.dim();
  CorollaryBound out;
  // ||f||_inf |B| a^n = 1/4, so P(|X + y| < a) <= 1/4.
  out.inner_radius = std::exp((std::log(0.25) - m.log_sup_density() - log_unit_ball_volume(n)) / n);
  out.value = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < shift_candidates.size(); ++k) {
    Vector const& y = shift_candidates[k];
    if (y.size() != static_cast<std::size_t>(n)) throw InputError("corollary_bound: shift dimension mismatch");
    Vector shifted = m.shift();
    for (int j = 0; j < n; ++j) shifted[j] += y[j];
    RadialStats const stats = radial_stats(m.with_shift(shifted), budget, seed);
    // Markov: P(|X + y| > 4 E|X + y|) <= 1/4.
    double const b = 4.0 * stats.mean_norm;
    // sqrt((b/a)^2 - 1) <= b/a turns the general bound into C (1-delta) sqrt(n) a / b^2.
    double const value = c * (1.0 - delta) * std::sqrt(static_cast<double>(n)) * out.inner_radius / (b * b);
    out.outer_radii.push_back(b);
    out.candidate_values.push_back(value);
    if (value > out.value) {
      out.value = value;
      out.best_index = k;
    }
  }
  return out;
}

RadialStats trial_stats(MeasureSpec const& m, std::uint64_t seed, std::size_t budget) {
  return radial_stats(m, budget, derive_seed(seed, StreamTag::samples, 0xFFFF'FFFF));
}

NazarovRun run_nazarov_trials(MeasureSpec const& m, double alpha, std::size_t trials, std::size_t samples,
                              std::uint64_t seed, NazarovOptions const& options) {
  if (trials < 1) throw InputError("empirical_nazarov_perimeter: trials must be at least 1");
  NazarovRun run;
  run.stats = trial_stats(m, seed, options.stats_budget);
  run.params = make_params(run.stats, alpha, options.beta);
  double const eps = options.eps > 0.0 ? options.eps : default_eps(m);

  for (std::size_t t = 0; t < trials; ++t) {
    Polytope const q = build_polytope(run.params, m.dim(), derive_seed(seed, StreamTag::polytope, t));
    PerimeterEstimate const e = facet_shell_perimeter(q, m, samples, eps, derive_seed(seed, StreamTag::trial, t));
    run.trial_values.push_back(e.value);
    run.trial_std_errors.push_back(e.std_error);
  }

  double const count = static_cast<double>(trials);
  double mean = 0.0;
  for (double v : run.trial_values) mean += v;
  mean /= count;
  double std_error = 0.0;
  if (trials == 1) {
    std_error = run.trial_std_errors.front();
  } else {
    double ss = 0.0;
    for (double v : run.trial_values) ss += (v - mean) * (v - mean);
    std_error = std::sqrt(ss / (count - 1.0) / count);
  }
  run.estimate.value = mean;
  run.estimate.std_error = std_error;
  run.estimate.eps = eps;
  run.estimate.samples = samples * trials;
  run.estimate.method = PerimeterMethod::facet_shell;
  run.estimate.side = resolve_side(ShellSide::automatic, m);
  return run;
}

PerimeterEstimate empirical_nazarov_perimeter(MeasureSpec const& m, double alpha, std::size_t trials,
                                              std::size_t samples, std::uint64_t seed,
                                              NazarovOptions const& options) {
  return run_nazarov_trials(m, alpha, trials, samples, seed, options).estimate;
}

double thin_shell_observation(int n, double var_bound, double c) {
  if (n < 1) throw InputError("thin_shell_observation: n must be positive");
  if (!(var_bound > 0.0)) throw InputError("thin_shell_observation: variance bound must be positive");
  double const root_n = std::sqrt(static_cast<double>(n));
  return c * root_n / (std::pow(var_bound, 0.25) * std::sqrt(root_n));
}

}  // namespace maxperim
