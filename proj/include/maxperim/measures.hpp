#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "maxperim/bodies.hpp"
#include "maxperim/random.hpp"

namespace maxperim {

enum class Family { gaussian, pnorm, uniform };

std::string to_string(Family family);

/*
 * A probability measure on R^n, described as the law of
 *
 *     X = shift + scale * Z,
 *
 * where Z follows one of the base laws:
 *  - gaussian: standard normal, density (2 pi)^{-n/2} exp(-|z|^2 / 2);
 *  - pnorm:    density C_{n,p} exp(-|z|^p / p) with the Euclidean norm, p > 0;
 *  - uniform:  uniform on a ball or a box.
 *
 * Instances are immutable and may be shared between threads.
 */
class MeasureSpec {
 public:
  static MeasureSpec gaussian(int dim, Vector shift = {}, double scale = 1.0);
  static MeasureSpec pnorm(int dim, double p, Vector shift = {}, double scale = 1.0);
  static MeasureSpec uniform(NamedBody body, Vector shift = {}, double scale = 1.0);

  Family family() const { return family_; }
  int dim() const { return dim_; }
  // Exponent of the radial profile; 2 for the Gaussian, 0 for uniform.
  double p() const { return p_; }
  Vector const& shift() const { return shift_; }
  double scale() const { return scale_; }
  // Base body of a uniform measure, before shift and scale.
  NamedBody const* body() const { return body_ ? &*body_ : nullptr; }
  // Body actually carrying a uniform measure, after shift and scale.
  std::optional<NamedBody> support() const;

  MeasureSpec with_scale(double scale) const;
  MeasureSpec with_shift(Vector shift) const;

  double density(ConstPoint x) const;
  // -inf outside the support.
  double log_density(ConstPoint x) const;
  double sup_density() const;
  double log_sup_density() const;

  bool is_log_concave() const;
  // Density nonincreasing along every ray from the origin.
  bool is_ray_decreasing() const;
  // Barycenter at 0 and identity covariance.
  bool is_isotropic(double tol = 1e-9) const;
  // Base law is symmetric about the origin of its own frame.
  bool is_symmetric() const;

  // E|Z|^2 for the base law.
  double base_second_moment() const;
  // Characteristic length of the measure: scale * sqrt(E|Z|^2 / n) for radial
  // laws, scale * inradius for uniform ones.
  double length_scale() const;

  // One draw from the base law Z into `out` (size dim()).
  void sample_base(Engine& rng, std::span<double> out) const;

  std::string describe() const;

 private:
  MeasureSpec(Family family, int dim, double p, Vector shift, double scale, std::optional<NamedBody> body);

  double base_log_density(ConstPoint z) const;

  Family family_;
  int dim_;
  double p_;
  Vector shift_;
  double scale_;
  std::optional<NamedBody> body_;
  double log_base_sup_;  // log sup density of Z
};

// log C_{n,p}^{-1} = log|S^{n-1}| + (n/p - 1) log p + log Gamma(n/p).
double pnorm_log_inverse_normalizer(int n, double p);

// E|G| for a standard Gaussian vector G in R^n: sqrt(2) Gamma((n+1)/2) / Gamma(n/2).
double gaussian_norm_mean(int n);

double density_at(MeasureSpec const& m, ConstPoint x);

// Samples are generated in fixed-size chunks; chunk k always comes from
// substream(seed, samples, k), so results do not depend on the thread count.
inline constexpr std::size_t kSampleChunk = 4096;

// Base-law draws Z for one chunk, row-major `count x dim` into `out`.
void sample_base_chunk(MeasureSpec const& m, std::uint64_t seed, std::size_t chunk,
                       std::size_t count, std::span<double> out);

// i.i.d. draws X = shift + scale * Z.
std::vector<Vector> sample_batch(MeasureSpec const& m, std::size_t count, std::uint64_t seed);

enum class StatsMethod { closed_form, monte_carlo };

struct RadialStats {
  double mean_norm = 0.0;
  double var_norm = 0.0;
  StatsMethod method = StatsMethod::closed_form;
  double mean_std_error = 0.0;
  double var_std_error = 0.0;

  double norm_sd() const;
};

// E|X| and Var|X|. Closed form for the centered Gaussian, Monte Carlo otherwise.
RadialStats radial_stats(MeasureSpec const& m, std::size_t budget = 200'000, std::uint64_t seed = 0);

// P(|X - shift| <= r), closed form for radial laws and uniform balls.
double centered_ball_mass(MeasureSpec const& m, double r);

}  // namespace maxperim
