#include "maxperim/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "maxperim/errors.hpp"
#include "maxperim/parallel.hpp"
#include "maxperim/special.hpp"

namespace maxperim {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Vector normalize_shift(int dim, Vector shift) {
  if (shift.empty()) return Vector(static_cast<std::size_t>(dim), 0.0);
  if (shift.size() != static_cast<std::size_t>(dim)) throw InputError("MeasureSpec: shift dimension mismatch");
  for (double v : shift)
    if (!std::isfinite(v)) throw InputError("MeasureSpec: shift must be finite");
  return shift;
}

void unit_direction(Engine& rng, std::span<double> out) {
  std::normal_distribution<double> normal;
  double len2 = 0.0;
  do {
    len2 = 0.0;
    for (double& v : out) {
      v = normal(rng);
      len2 += v * v;
    }
  } while (len2 == 0.0);
  double const inv = 1.0 / std::sqrt(len2);
  for (double& v : out) v *= inv;
}

}  // namespace

std::string to_string(Family family) {
  switch (family) {
    case Family::gaussian: return "gaussian";
    case Family::pnorm: return "pnorm";
    case Family::uniform: return "uniform";
  }
  return "unknown";
}

double pnorm_log_inverse_normalizer(int n, double p) {
  double const np = n / p;
  return log_unit_sphere_area(n) + (np - 1.0) * std::log(p) + std::lgamma(np);
}

double gaussian_norm_mean(int n) {
  if (n <= 0) throw InputError("gaussian_norm_mean: n must be positive");
  return std::numbers::sqrt2 * std::exp(std::lgamma(0.5 * (n + 1)) - std::lgamma(0.5 * n));
}

MeasureSpec::MeasureSpec(Family family, int dim, double p, Vector shift, double scale,
                         std::optional<NamedBody> body)
    : family_(family), dim_(dim), p_(p), shift_(std::move(shift)), scale_(scale), body_(std::move(body)),
      log_base_sup_(0.0) {
  if (dim_ <= 0) throw InputError("MeasureSpec: dimension must be positive");
  if (!(scale_ > 0.0) || !std::isfinite(scale_)) throw InputError("MeasureSpec: scale must be positive");
  switch (family_) {
    case Family::gaussian:
      log_base_sup_ = -0.5 * dim_ * std::log(2.0 * std::numbers::pi);
      break;
    case Family::pnorm:
      if (!(p_ > 0.0) || !std::isfinite(p_)) throw InputError("MeasureSpec: pnorm requires finite p > 0");
      log_base_sup_ = -pnorm_log_inverse_normalizer(dim_, p_);
      if (!std::isfinite(log_base_sup_)) throw InputError("MeasureSpec: pnorm normalizer is not finite");
      break;
    case Family::uniform: {
      if (std::holds_alternative<Halfspace>(*body_))
        throw UnsupportedError("MeasureSpec: uniform measure on an unbounded body has no sampler");
      log_base_sup_ = -std::log(body_volume(to_body(*body_)).value);
      break;
    }
  }
}

MeasureSpec MeasureSpec::gaussian(int dim, Vector shift, double scale) {
  if (dim <= 0) throw InputError("MeasureSpec: dimension must be positive");
  return MeasureSpec(Family::gaussian, dim, 2.0, normalize_shift(dim, std::move(shift)), scale, std::nullopt);
}

MeasureSpec MeasureSpec::pnorm(int dim, double p, Vector shift, double scale) {
  if (dim <= 0) throw InputError("MeasureSpec: dimension must be positive");
  return MeasureSpec(Family::pnorm, dim, p, normalize_shift(dim, std::move(shift)), scale, std::nullopt);
}

MeasureSpec MeasureSpec::uniform(NamedBody body, Vector shift, double scale) {
  int const dim = dimension(body);
  return MeasureSpec(Family::uniform, dim, 0.0, normalize_shift(dim, std::move(shift)), scale, std::move(body));
}

std::optional<NamedBody> MeasureSpec::support() const {
  if (!body_) return std::nullopt;
  return as_named(from_standard_frame(to_body(*body_), shift_, scale_));
}

MeasureSpec MeasureSpec::with_scale(double scale) const {
  return MeasureSpec(family_, dim_, p_, shift_, scale, body_);
}

MeasureSpec MeasureSpec::with_shift(Vector shift) const {
  return MeasureSpec(family_, dim_, p_, normalize_shift(dim_, std::move(shift)), scale_, body_);
}

double MeasureSpec::base_log_density(ConstPoint z) const {
  switch (family_) {
    case Family::gaussian: return log_base_sup_ - 0.5 * dot(z, z);
    case Family::pnorm: return log_base_sup_ - std::pow(norm(z), p_) / p_;
    case Family::uniform: return contains(to_body(*body_), z) ? log_base_sup_ : kNegInf;
  }
  return kNegInf;
}

double MeasureSpec::log_density(ConstPoint x) const {
  if (x.size() != static_cast<std::size_t>(dim_)) throw InputError("density_at: dimension mismatch");
  Vector z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = (x[i] - shift_[i]) / scale_;
  return base_log_density(z) - dim_ * std::log(scale_);
}

double MeasureSpec::density(ConstPoint x) const { return std::exp(log_density(x)); }

double MeasureSpec::log_sup_density() const { return log_base_sup_ - dim_ * std::log(scale_); }

double MeasureSpec::sup_density() const { return std::exp(log_sup_density()); }

bool MeasureSpec::is_log_concave() const { return family_ != Family::pnorm || p_ >= 1.0; }

bool MeasureSpec::is_ray_decreasing() const {
  bool const at_origin = std::all_of(shift_.begin(), shift_.end(), [](double v) { return v == 0.0; });
  if (family_ != Family::uniform) return at_origin;
  // Uniform on a convex body is ray-decreasing from any point of the body.
  Vector const origin(static_cast<std::size_t>(dim_), 0.0);
  return contains(to_body(*support()), origin);
}

bool MeasureSpec::is_symmetric() const {
  if (family_ != Family::uniform) return true;
  return std::visit([](auto const& b) {
    if constexpr (requires { b.center(); }) {
      return std::all_of(b.center().begin(), b.center().end(), [](double v) { return v == 0.0; });
    }
    return false;
  }, *body_);
}

double MeasureSpec::base_second_moment() const {
  double const n = dim_;
  switch (family_) {
    case Family::gaussian: return n;
    case Family::pnorm:
      return std::exp((2.0 / p_) * std::log(p_) + std::lgamma((n + 2.0) / p_) - std::lgamma(n / p_));
    case Family::uniform:
      return std::visit(
          [&](auto const& b) -> double {
            using B = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<B, Ball>) {
              return n / (n + 2.0) * b.radius() * b.radius() + dot(b.center(), b.center());
            } else if constexpr (std::is_same_v<B, Box>) {
              double s = 0.0;
              for (std::size_t i = 0; i < b.half_widths().size(); ++i)
                s += b.half_widths()[i] * b.half_widths()[i] / 3.0 + b.center()[i] * b.center()[i];
              return s;
            } else {
              return std::numeric_limits<double>::infinity();
            }
          },
          *body_);
  }
  return 0.0;
}

bool MeasureSpec::is_isotropic(double tol) const {
  if (!is_symmetric()) return false;
  if (std::any_of(shift_.begin(), shift_.end(), [](double v) { return v != 0.0; })) return false;
  // Coordinate variances of the base law are equal for radial laws and for
  // uniform balls; boxes need every half-width to match.
  if (family_ == Family::uniform) {
    if (auto const* box = std::get_if<Box>(&*body_)) {
      auto const& h = box->half_widths();
      if (std::any_of(h.begin(), h.end(), [&](double v) { return std::abs(v - h.front()) > tol * h.front(); }))
        return false;
    }
  }
  double const coordinate_variance = scale_ * scale_ * base_second_moment() / dim_;
  return std::abs(coordinate_variance - 1.0) <= tol;
}

double MeasureSpec::length_scale() const {
  if (family_ == Family::uniform) return scale_ * inradius(to_body(*body_));
  return scale_ * std::sqrt(base_second_moment() / dim_);
}

void MeasureSpec::sample_base(Engine& rng, std::span<double> out) const {
  switch (family_) {
    case Family::gaussian: {
      std::normal_distribution<double> normal;
      for (double& v : out) v = normal(rng);
      return;
    }
    case Family::pnorm: {
      // |Z|^p / p ~ Gamma(n/p, 1), direction uniform and independent.
      std::gamma_distribution<double> gamma(dim_ / p_, 1.0);
      double const radius = std::pow(p_ * gamma(rng), 1.0 / p_);
      unit_direction(rng, out);
      for (double& v : out) v *= radius;
      return;
    }
    case Family::uniform: {
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      if (auto const* ball = std::get_if<Ball>(&*body_)) {
        double const radius = ball->radius() * std::pow(unit(rng), 1.0 / dim_);
        unit_direction(rng, out);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = ball->center()[i] + radius * out[i];
      } else {
        auto const& box = std::get<Box>(*body_);
        for (std::size_t i = 0; i < out.size(); ++i)
          out[i] = box.center()[i] + box.half_widths()[i] * (2.0 * unit(rng) - 1.0);
      }
      return;
    }
  }
}

std::string MeasureSpec::describe() const {
  std::ostringstream os;
  os << to_string(family_) << "(n=" << dim_;
  if (family_ == Family::pnorm) os << ",p=" << p_;
  if (family_ == Family::uniform) {
    os << ",body=";
    std::visit([&](auto const& b) {
      using B = std::decay_t<decltype(b)>;
      if constexpr (std::is_same_v<B, Ball>) os << "ball(r=" << b.radius() << ")";
      else if constexpr (std::is_same_v<B, Box>) os << "box";
      else os << "halfspace";
    }, *body_);
  }
  if (scale_ != 1.0) os << ",scale=" << scale_;
  if (std::any_of(shift_.begin(), shift_.end(), [](double v) { return v != 0.0; })) os << ",shifted";
  os << ")";
  return os.str();
}

double density_at(MeasureSpec const& m, ConstPoint x) { return m.density(x); }

void sample_base_chunk(MeasureSpec const& m, std::uint64_t seed, std::size_t chunk, std::size_t count,
                       std::span<double> out) {
  std::size_t const n = static_cast<std::size_t>(m.dim());
  if (out.size() < count * n) throw InputError("sample_base_chunk: output too small");
  Engine rng = substream(seed, StreamTag::samples, chunk);
  for (std::size_t s = 0; s < count; ++s) m.sample_base(rng, out.subspan(s * n, n));
}

std::vector<Vector> sample_batch(MeasureSpec const& m, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw InputError("sample_batch: count must be at least 1");
  std::size_t const n = static_cast<std::size_t>(m.dim());
  std::vector<Vector> out(count, Vector(n));
  std::size_t const chunks = (count + kSampleChunk - 1) / kSampleChunk;
  parallel_for(chunks, [&](std::size_t k) {
    std::size_t const first = k * kSampleChunk;
    std::size_t const c = std::min(kSampleChunk, count - first);
    std::vector<double> z(c * n);
    sample_base_chunk(m, seed, k, c, z);
    for (std::size_t s = 0; s < c; ++s)
      for (std::size_t j = 0; j < n; ++j) out[first + s][j] = m.shift()[j] + m.scale() * z[s * n + j];
  });
  return out;
}

double RadialStats::norm_sd() const { return std::sqrt(std::max(0.0, var_norm)); }

RadialStats radial_stats(MeasureSpec const& m, std::size_t budget, std::uint64_t seed) {
  bool const centered = std::all_of(m.shift().begin(), m.shift().end(), [](double v) { return v == 0.0; });
  if (m.family() == Family::gaussian && centered) {
    double const mean = gaussian_norm_mean(m.dim());
    RadialStats s;
    s.mean_norm = m.scale() * mean;
    s.var_norm = m.scale() * m.scale() * (m.dim() - mean * mean);
    s.method = StatsMethod::closed_form;
    return s;
  }
  if (budget < 1000) throw InputError("radial_stats: Monte Carlo budget must be at least 1000");

  std::size_t const n = static_cast<std::size_t>(m.dim());
  std::vector<double> norms(budget);
  std::size_t const chunks = (budget + kSampleChunk - 1) / kSampleChunk;
  parallel_for(chunks, [&](std::size_t k) {
    std::size_t const first = k * kSampleChunk;
    std::size_t const c = std::min(kSampleChunk, budget - first);
    std::vector<double> z(c * n);
    sample_base_chunk(m, seed, k, c, z);
    for (std::size_t s = 0; s < c; ++s) {
      double r2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        double const x = m.shift()[j] + m.scale() * z[s * n + j];
        r2 += x * x;
      }
      norms[first + s] = std::sqrt(r2);
    }
  });

  double const count = static_cast<double>(budget);
  double sum = 0.0, comp = 0.0;  // Neumaier
  for (double r : norms) {
    double const t = sum + r;
    comp += std::abs(sum) >= std::abs(r) ? (sum - t) + r : (r - t) + sum;
    sum = t;
  }
  double const mean = (sum + comp) / count;
  double m2 = 0.0, m4 = 0.0;
  for (double r : norms) {
    double const d2 = (r - mean) * (r - mean);
    m2 += d2;
    m4 += d2 * d2;
  }
  RadialStats s;
  s.method = StatsMethod::monte_carlo;
  s.mean_norm = mean;
  s.var_norm = m2 / (count - 1.0);
  s.mean_std_error = std::sqrt(s.var_norm / count);
  double const central4 = m4 / count;
  s.var_std_error = std::sqrt(std::max(0.0, central4 - s.var_norm * s.var_norm) / count);
  return s;
}

double centered_ball_mass(MeasureSpec const& m, double r) {
  if (r <= 0.0) return 0.0;
  double const u = r / m.scale();
  double const n = m.dim();
  switch (m.family()) {
    case Family::gaussian: return regularized_gamma_p(0.5 * n, 0.5 * u * u);
    case Family::pnorm: return regularized_gamma_p(n / m.p(), std::pow(u, m.p()) / m.p());
    case Family::uniform:
      if (auto const* ball = std::get_if<Ball>(m.body())) {
        if (std::any_of(ball->center().begin(), ball->center().end(), [](double v) { return v != 0.0; }))
          break;
        return std::min(1.0, std::pow(u / ball->radius(), n));
      }
      break;
  }
  throw UnsupportedError("centered_ball_mass: no closed form for " + m.describe());
}

}  // namespace maxperim
