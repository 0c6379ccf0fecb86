#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "maxperim/bodies.hpp"
#include "maxperim/measures.hpp"
#include "maxperim/perimeter.hpp"

namespace maxperim {

// Default for the constant of the isotropic inradius lemma. The lemma only
// guarantees some absolute constant no smaller than 8 log 10; the true value
// is not known, so this is the smallest admissible choice and is flagged as
// external wherever it is used.
inline double const kDefaultIsotropicConstant = 8.0 * 2.302585092994046;

// Closed-form level sets K_t = { f >= t } of a measure: Euclidean balls about
// the center for the radial families, the support itself for uniform measures.
class LevelSetOracle {
 public:
  explicit LevelSetOracle(MeasureSpec measure);

  MeasureSpec const& measure() const { return measure_; }
  int dim() const { return measure_.dim(); }
  double sup_density() const { return sup_density_; }
  double log_sup_density() const { return log_sup_density_; }

  // Radius of K_t about the center (radial laws); inradius of K for uniform.
  double inradius(double t) const;
  double volume(double t) const;
  double log_volume(double t) const;
  // ||f||_inf |K_t|, computed in log space.
  double normalized_volume(double t) const;
  // mu(K_t)
  double mass(double t) const;
  // K_t as a body; throws if K_t is empty or a single point.
  NamedBody level_body(double t) const;

 private:
  bool radial() const { return measure_.family() != Family::uniform; }
  double level_radius(double t) const;

  MeasureSpec measure_;
  double sup_density_;
  double log_sup_density_;
};

// 400 log-spaced levels over [1e-8, 1 - 1e-8] * ||f||_inf.
std::vector<double> default_t_grid(LevelSetOracle const& oracle, std::size_t points = 400);

// n |K| / R for a body containing a ball of radius R.
double inradius_surface_bound(double volume, double inradius, int n);

struct LevelSetBound {
  double best_t = 0.0;
  double value = 0.0;
  bool unbounded = false;
};

// n * min_t (||f||_inf |K_t| + 1) / R_t over the grid; bounds mu^+(dQ) for every convex Q.
LevelSetBound levelset_upper_bound(LevelSetOracle const& oracle, std::vector<double> const& t_grid);

// 2 n ||f||_inf / max_t (t R_t) over the grid.
LevelSetBound remark_bound(LevelSetOracle const& oracle, std::vector<double> const& t_grid);

// A level t with ||f||_inf |K_t| in [1 - alpha, 1 + alpha].
double find_balanced_t(LevelSetOracle const& oracle, double alpha);

struct InclusionCheck {
  bool holds = false;
  double inner_radius = 0.0;  // R of K_{t^{1/lambda} ||f||}
  double outer_radius = 0.0;  // R of K_{t ||f||} / lambda
  bool hypothesis_ok = true;  // measure is log-concave
};

// Log-concave level-set scaling: K_{t^{1/lambda} ||f||} inside (1/lambda) K_{t ||f||} + y.
InclusionCheck scaling_inclusion_check(LevelSetOracle const& oracle, double t, double lambda);

// Volume of the regular simplex circumscribing the unit ball, to the power 1/n.
double simplex_volume_ratio_constant(int n);

struct JohnBound {
  double value = 0.0;
  double c0 = 0.0;
  // Diagonal volume-preserving map taking the level sets to John position;
  // the bound holds for the pushed-forward measure.
  Vector position_scales;
  bool identity_position = true;
};

JohnBound john_position_bound(MeasureSpec const& m, bool symmetric, std::optional<double> c0 = std::nullopt);

// Radius of the largest origin-centered ball inside the body (<= 0 if the origin is not interior).
double origin_inradius(Body const& body);

struct MassEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

// mu(Q); closed form for balls about the center of a radial law, Monte Carlo otherwise.
MassEstimate measure_of(Body const& body, MeasureSpec const& m, std::size_t samples = 200'000,
                        std::uint64_t seed = 0);

// n mu(Q) / R for Q containing R B_2^n and a ray-decreasing density.
double ray_decreasing_bound(Body const& body, MeasureSpec const& m, double mass,
                            std::optional<double> claimed_radius = std::nullopt);

// 10 n^2 (e^{C0} + 1) for isotropic log-concave measures.
double isotropic_lc_bound(int n, double c0 = kDefaultIsotropicConstant);

enum class BoundKind { gamma_lower, gamma_upper, body_upper, informational };

std::string to_string(BoundKind kind);

struct BoundEntry {
  std::string name;
  double value = 0.0;
  BoundKind kind = BoundKind::informational;
  std::string note;
};

struct BoundReport {
  std::string measure;
  std::string body;
  double lower = 0.0;
  std::string lower_source;
  double upper = 0.0;
  std::string upper_source;
  std::optional<PerimeterEstimate> empirical;
  std::vector<BoundEntry> bounds_applied;
};

struct ReportOptions {
  std::size_t samples = 200'000;
  std::uint64_t seed = 0;
  double eps = 0.0;  // 0 selects default_eps
  double balance_alpha = 0.1;
  std::optional<double> isotropic_c0;
  std::optional<double> john_c0;
};

BoundReport bounds_report(MeasureSpec const& m, std::optional<Body> const& body, ReportOptions const& options = {});

}  // namespace maxperim
