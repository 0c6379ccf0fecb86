#include "maxperim/upper_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "maxperim/errors.hpp"
#include "maxperim/nazarov.hpp"
#include "maxperim/parallel.hpp"
#include "maxperim/special.hpp"

namespace maxperim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_level(LevelSetOracle const& o, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InputError("level t must be positive");
  (void)o;
}

std::string describe_body(Body const& body) {
  std::ostringstream os;
  std::visit([&](auto const& b) {
    using B = std::decay_t<decltype(b)>;
    if constexpr (std::is_same_v<B, Ball>) os << "ball(r=" << b.radius() << ")";
    else if constexpr (std::is_same_v<B, Box>) os << "box";
    else if constexpr (std::is_same_v<B, Halfspace>) os << "halfspace";
    else os << "polytope(N=" << b.facet_count() << ")";
  }, body);
  return os.str();
}

}  // namespace

LevelSetOracle::LevelSetOracle(MeasureSpec measure)
    : measure_(std::move(measure)), sup_density_(measure_.sup_density()),
      log_sup_density_(measure_.log_sup_density()) {}

double LevelSetOracle::level_radius(double t) const {
  check_level(*this, t);
  double const gap = log_sup_density_ - std::log(t);  // log(||f|| / t)
  if (gap <= 0.0) return 0.0;
  double const p = measure_.p();
  return measure_.scale() * std::pow(p * gap, 1.0 / p);
}

double LevelSetOracle::inradius(double t) const {
  if (radial()) return level_radius(t);
  check_level(*this, t);
  if (t > sup_density_) return 0.0;
  return measure_.scale() * maxperim::inradius(to_body(*measure_.body()));
}

double LevelSetOracle::log_volume(double t) const {
  check_level(*this, t);
  if (radial()) {
    double const r = level_radius(t);
    if (r <= 0.0) return -kInf;
    return log_unit_ball_volume(dim()) + dim() * std::log(r);
  }
  if (t > sup_density_) return -kInf;
  return -log_sup_density_;
}

double LevelSetOracle::volume(double t) const { return std::exp(log_volume(t)); }

double LevelSetOracle::normalized_volume(double t) const { return std::exp(log_volume(t) + log_sup_density_); }

double LevelSetOracle::mass(double t) const {
  if (radial()) return centered_ball_mass(measure_, level_radius(t));
  check_level(*this, t);
  return t <= sup_density_ ? 1.0 : 0.0;
}

NamedBody LevelSetOracle::level_body(double t) const {
  if (radial()) {
    double const r = level_radius(t);
    if (r <= 0.0) throw InputError("level_body: level set is empty or a single point");
    return Ball(r, measure_.shift());
  }
  check_level(*this, t);
  if (t > sup_density_) throw InputError("level_body: level set is empty");
  return *measure_.support();
}

std::vector<double> default_t_grid(LevelSetOracle const& oracle, std::size_t points) {
  if (points < 2) throw InputError("default_t_grid: need at least two points");
  double const lo = std::log(1e-8) + oracle.log_sup_density();
  double const hi = std::log1p(-1e-8) + oracle.log_sup_density();
  std::vector<double> grid(points);
  for (std::size_t k = 0; k < points; ++k)
    grid[k] = std::exp(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1));
  return grid;
}

double inradius_surface_bound(double volume, double inradius, int n) {
  if (!(inradius > 0.0)) throw InputError("inradius_surface_bound: R must be positive");
  if (!(volume > 0.0)) throw InputError("inradius_surface_bound: volume must be positive");
  if (n < 1) throw InputError("inradius_surface_bound: n must be positive");
  return n * volume / inradius;
}

namespace {

void check_grid(LevelSetOracle const& oracle, std::vector<double> const& grid) {
  if (grid.empty()) throw InputError("t grid is empty");
  for (double t : grid)
    if (!(t > 0.0 && t < oracle.sup_density())) throw InputError("t grid must lie in (0, ||f||_inf)");
}

}  // namespace

LevelSetBound levelset_upper_bound(LevelSetOracle const& oracle, std::vector<double> const& t_grid) {
  check_grid(oracle, t_grid);
  LevelSetBound best{0.0, kInf, true};
  for (double t : t_grid) {
    double const r = oracle.inradius(t);
    if (!(r > 0.0)) continue;
    double const value = oracle.dim() * (oracle.normalized_volume(t) + 1.0) / r;
    if (value < best.value) best = {t, value, false};
  }
  return best;
}

LevelSetBound remark_bound(LevelSetOracle const& oracle, std::vector<double> const& t_grid) {
  check_grid(oracle, t_grid);
  double best_product = 0.0;
  double best_t = 0.0;
  for (double t : t_grid) {
    double const product = t * oracle.inradius(t);
    if (product > best_product) {
      best_product = product;
      best_t = t;
    }
  }
  if (!(best_product > 0.0)) return {0.0, kInf, true};
  return {best_t, 2.0 * oracle.dim() * oracle.sup_density() / best_product, false};
}

double find_balanced_t(LevelSetOracle const& oracle, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("find_balanced_t: alpha must lie in (0, 1)");
  double const fmax = oracle.sup_density();
  auto const balanced = [&](double t) {
    double const g = oracle.normalized_volume(t);
    return g >= 1.0 - alpha && g <= 1.0 + alpha;
  };
  constexpr int kMaxIter = 200;

  // tau with mu(K_tau) >= 1 - alpha; then |K_tau| ||f|| >= 1 - alpha.
  double log_tau = oracle.log_sup_density() + std::log(0.5);
  int iter = 0;
  while (oracle.mass(std::exp(log_tau)) < 1.0 - alpha) {
    log_tau -= 1.0;
    if (++iter > kMaxIter) throw NumericalError("find_balanced_t: no level with mass >= 1 - alpha found");
  }
  double const tau = std::exp(log_tau);
  if (balanced(tau)) return tau;

  // s = ||f|| / (1 + alpha) has |K_s| ||f|| <= 1 + alpha.
  double const s = fmax / (1.0 + alpha);
  if (balanced(s)) return s;

  // |K_tau| ||f|| > 1 + alpha and |K_s| ||f|| < 1 - alpha: bisect on log t.
  double lo = log_tau, hi = std::log(s);
  for (int k = 0; k < kMaxIter; ++k) {
    double const mid = 0.5 * (lo + hi);
    double const t = std::exp(mid);
    double const g = oracle.normalized_volume(t);
    if (g >= 1.0 - alpha && g <= 1.0 + alpha) return t;
    if (g > 1.0) lo = mid;
    else hi = mid;
  }
  std::ostringstream os;
  os << "find_balanced_t: bisection did not bracket a balanced level in " << kMaxIter
     << " iterations (tau=" << tau << ", s=" << s << ", g(tau)=" << oracle.normalized_volume(tau)
     << ", g(s)=" << oracle.normalized_volume(s) << ")";
  throw NumericalError(os.str());
}

InclusionCheck scaling_inclusion_check(LevelSetOracle const& oracle, double t, double lambda) {
  if (!(t > 0.0 && t < 1.0)) throw InputError("scaling_inclusion_check: t must lie in (0, 1)");
  if (!(lambda > 0.0 && lambda <= 1.0)) throw InputError("scaling_inclusion_check: lambda must lie in (0, 1]");
  InclusionCheck out;
  out.hypothesis_ok = oracle.measure().is_log_concave();
  double const fmax = oracle.sup_density();
  // t^{1/lambda} ||f|| computed in logs to avoid underflow for small lambda.
  double const inner_level = std::exp(std::log(t) / lambda + oracle.log_sup_density());
  out.inner_radius = inner_level > 0.0 ? oracle.inradius(inner_level) : kInf;
  out.outer_radius = oracle.inradius(t * fmax) / lambda;
  out.holds = out.inner_radius <= out.outer_radius * (1.0 + 1e-12);
  return out;
}

double simplex_volume_ratio_constant(int n) {
  if (n < 1) throw InputError("simplex_volume_ratio_constant: n must be positive");
  double const nd = n;
  double const log_volume = 0.5 * nd * std::log(nd) + 0.5 * (nd + 1.0) * std::log(nd + 1.0) - std::lgamma(nd + 1.0);
  return std::exp(log_volume / nd);
}

JohnBound john_position_bound(MeasureSpec const& m, bool symmetric, std::optional<double> c0) {
  int const n = m.dim();
  JohnBound out;
  out.position_scales.assign(static_cast<std::size_t>(n), 1.0);
  if (m.family() == Family::uniform) {
    if (auto const* box = std::get_if<Box>(m.body())) {
      // diag(g / h_i) with g the geometric mean maps the box to a cube of equal volume.
      auto const& h = box->half_widths();
      double log_mean = 0.0;
      for (double v : h) log_mean += std::log(v);
      double const g = std::exp(log_mean / n);
      for (int i = 0; i < n; ++i) out.position_scales[i] = g / h[i];
      out.identity_position =
          std::all_of(h.begin(), h.end(), [&](double v) { return std::abs(v - h.front()) <= 1e-12 * h.front(); });
    } else if (!std::holds_alternative<Ball>(*m.body())) {
      throw UnsupportedError("john_position_bound: level sets must be balls or boxes");
    }
  }
  if (symmetric && !m.is_symmetric())
    throw PreconditionError("john_position_bound: symmetric constant requires an even density");
  out.c0 = symmetric ? 2.0 : c0.value_or(simplex_volume_ratio_constant(n));
  if (!(out.c0 > 0.0)) throw InputError("john_position_bound: C0 must be positive");
  out.value = 2.0 * out.c0 * n * std::exp(m.log_sup_density() / n);
  return out;
}

double origin_inradius(Body const& body) {
  return std::visit(
      [](auto const& b) -> double {
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<B, Ball>) {
          return b.radius() - norm(b.center());
        } else if constexpr (std::is_same_v<B, Box>) {
          double r = kInf;
          for (std::size_t i = 0; i < b.half_widths().size(); ++i)
            r = std::min(r, b.half_widths()[i] - std::abs(b.center()[i]));
          return r;
        } else if constexpr (std::is_same_v<B, Halfspace>) {
          return b.offset() / b.normal_norm();
        } else {
          double r = kInf;
          for (std::size_t i = 0; i < b.facet_count(); ++i) r = std::min(r, b.offset(i) / b.normal_norm(i));
          return r;
        }
      },
      body);
}

MassEstimate measure_of(Body const& body, MeasureSpec const& m, std::size_t samples, std::uint64_t seed) {
  if (dimension(body) != m.dim()) throw InputError("measure_of: dimension mismatch");
  if (auto const* ball = std::get_if<Ball>(&body)) {
    bool const centered = ball->center() == m.shift();
    if (centered && m.family() != Family::uniform) return {centered_ball_mass(m, ball->radius()), 0.0};
  }
  if (samples == 0) throw InputError("measure_of: samples must be positive");
  std::size_t const n = static_cast<std::size_t>(m.dim());
  Body const local = to_standard_frame(body, m.shift(), m.scale());
  std::size_t const chunks = (samples + kSampleChunk - 1) / kSampleChunk;
  std::vector<std::size_t> hits(chunks, 0);
  parallel_for(chunks, [&](std::size_t k) {
    std::size_t const count = std::min(kSampleChunk, samples - k * kSampleChunk);
    std::vector<double> z(count * n);
    sample_base_chunk(m, seed, k, count, z);
    std::size_t h = 0;
    for (std::size_t s = 0; s < count; ++s)
      if (contains(local, ConstPoint(z).subspan(s * n, n))) ++h;
    hits[k] = h;
  });
  double const frac =
      static_cast<double>(std::accumulate(hits.begin(), hits.end(), std::size_t{0})) / static_cast<double>(samples);
  return {frac, std::sqrt(frac * (1.0 - frac) / static_cast<double>(samples))};
}

double ray_decreasing_bound(Body const& body, MeasureSpec const& m, double mass, std::optional<double> claimed_radius) {
  if (dimension(body) != m.dim()) throw InputError("ray_decreasing_bound: dimension mismatch");
  if (!m.is_ray_decreasing())
    throw PreconditionError("ray_decreasing_bound: density must be nonincreasing along rays from the origin");
  double const available = origin_inradius(body);
  if (!(available > 0.0))
    throw PreconditionError("ray_decreasing_bound: body does not contain a ball about the origin");
  double const r = claimed_radius.value_or(available);
  if (!(r > 0.0)) throw InputError("ray_decreasing_bound: R must be positive");
  if (r > available * (1.0 + 1e-12))
    throw PreconditionError("ray_decreasing_bound: inradius about the origin is smaller than the claimed R");
  if (!(mass >= 0.0 && mass <= 1.0)) throw InputError("ray_decreasing_bound: mu(Q) must lie in [0, 1]");
  return m.dim() * mass / r;
}

double isotropic_lc_bound(int n, double c0) {
  if (n < 1) throw InputError("isotropic_lc_bound: n must be positive");
  if (!(c0 > 0.0)) throw InputError("isotropic_lc_bound: C0 must be positive");
  double const nd = n;
  return 10.0 * nd * nd * (std::exp(c0) + 1.0);
}

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::gamma_lower: return "gamma_lower";
    case BoundKind::gamma_upper: return "gamma_upper";
    case BoundKind::body_upper: return "body_upper";
    case BoundKind::informational: return "informational";
  }
  return "unknown";
}

BoundReport bounds_report(MeasureSpec const& m, std::optional<Body> const& body, ReportOptions const& options) {
  BoundReport report;
  report.measure = m.describe();
  report.body = body ? describe_body(*body) : "none";
  int const n = m.dim();
  auto add = [&](std::string name, double value, BoundKind kind, std::string note = {}) {
    report.bounds_applied.push_back({std::move(name), value, kind, std::move(note)});
  };

  // Lower bounds on Gamma(mu).
  RadialStats const stats = radial_stats(m, std::max<std::size_t>(options.samples, 1000), options.seed);
  double const w = stats.norm_sd() / stats.mean_norm;
  if (w > 0.0 && w < 1.0) {
    add("random_polytope_analytic", analytic_lower_bound(stats, w, n), BoundKind::gamma_lower,
        "alpha = sqrt(Var|X|)/E|X|");
  }
  std::vector<Vector> candidates{Vector(static_cast<std::size_t>(n), 0.0)};
  if (std::any_of(m.shift().begin(), m.shift().end(), [](double v) { return v != 0.0; })) {
    Vector back = m.shift();
    for (double& v : back) v = -v;
    candidates.push_back(back);
  }
  auto const corollary = corollary_bound(m, candidates, std::max<std::size_t>(options.samples, 1000), options.seed);
  add("annulus_corollary", corollary.value, BoundKind::gamma_lower, "constant C = 0.06 is a convention");

  // Upper bounds on Gamma(mu).
  LevelSetOracle const oracle(m);
  auto const grid = default_t_grid(oracle);
  auto const level = levelset_upper_bound(oracle, grid);
  add("levelset", level.value, BoundKind::gamma_upper, level.unbounded ? "unbounded" : "");
  auto const remark = remark_bound(oracle, grid);
  add("levelset_remark", remark.value, BoundKind::gamma_upper, remark.unbounded ? "unbounded" : "");

  double const balanced_t = find_balanced_t(oracle, options.balance_alpha);
  {
    std::ostringstream note;
    note << "t=" << balanced_t << " |K_t|*||f||=" << oracle.normalized_volume(balanced_t);
    add("balanced_level_inradius", oracle.inradius(balanced_t), BoundKind::informational, note.str());
  }

  try {
    bool const symmetric = m.is_symmetric();
    auto const john = john_position_bound(m, symmetric, options.john_c0);
    add("john_position", john.value, john.identity_position ? BoundKind::gamma_upper : BoundKind::informational,
        john.identity_position ? (symmetric ? "symmetric, C0 = 2" : "C0 = simplex volume ratio (external)")
                               : "holds after the diagonal John map only");
  } catch (UnsupportedError const&) {
  }

  if (m.is_isotropic(1e-9) && m.is_log_concave()) {
    double const c0 = options.isotropic_c0.value_or(kDefaultIsotropicConstant);
    add("isotropic_log_concave", isotropic_lc_bound(n, c0), BoundKind::gamma_upper,
        "C0 is an external constant");
  }

  if (body) {
    double const eps = options.eps > 0.0 ? options.eps : default_eps(m);
    if (auto const* polytope = std::get_if<Polytope>(&*body)) {
      report.empirical = facet_shell_perimeter(*polytope, m, options.samples, eps, options.seed);
    } else {
      report.empirical = generic_shell_perimeter(*as_named(*body), m, options.samples, eps, options.seed);
    }
    if (m.is_ray_decreasing() && origin_inradius(*body) > 0.0) {
      auto const mass = measure_of(*body, m, options.samples, options.seed);
      add("ray_decreasing", ray_decreasing_bound(*body, m, mass.value), BoundKind::body_upper,
          mass.std_error > 0.0 ? "mu(Q) by Monte Carlo" : "mu(Q) in closed form");
    }
  }

  report.lower = 0.0;
  report.lower_source = "none";
  report.upper = kInf;
  report.upper_source = "none";
  for (auto const& entry : report.bounds_applied) {
    if (entry.kind == BoundKind::gamma_lower && entry.value > report.lower) {
      report.lower = entry.value;
      report.lower_source = entry.name;
    }
    if ((entry.kind == BoundKind::gamma_upper || entry.kind == BoundKind::body_upper) && entry.value < report.upper) {
      report.upper = entry.value;
      report.upper_source = entry.name;
    }
  }
  return report;
}

}  // namespace maxperim
