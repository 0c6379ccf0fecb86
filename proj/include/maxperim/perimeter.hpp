#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "maxperim/bodies.hpp"
#include "maxperim/measures.hpp"

namespace maxperim {

enum class PerimeterMethod { facet_shell, generic_shell, closed_form };

std::string to_string(PerimeterMethod method);

// Which side of the boundary the eps-shell is counted on. For densities that
// are continuous across the boundary both sides give the same limit. A
// uniform measure jumps to zero on the boundary of its own support; there the
// inner shell yields the boundary integral of the density, and the outer shell
// would see no mass at all.
enum class ShellSide { automatic, outer, inner };

std::string to_string(ShellSide side);

struct PerimeterEstimate {
  double value = 0.0;
  double std_error = 0.0;
  double eps = 0.0;            // coarse shell width; the fine width is eps / 2
  std::size_t samples = 0;
  PerimeterMethod method = PerimeterMethod::closed_form;
  ShellSide side = ShellSide::automatic;

  double coarse_value = 0.0;   // raw estimate at eps
  double fine_value = 0.0;     // raw estimate at eps / 2
  std::size_t shell_hits = 0;  // samples in at least one coarse shell
  std::size_t overlap_hits = 0;  // samples in two or more coarse shells
  bool overlap_warning = false;  // overlap_hits > 1% of shell_hits
  bool zero_hits = false;        // std_error is a rule-of-three bound
};

// Monte Carlo estimate of the mu-perimeter of a polytope from facet shells:
//   sum_i P(m_i(X) in (0, eps |theta_i|], m_j(X) <= 0 for j != i) / eps,
// Richardson-extrapolated over (eps, eps/2) on common samples.
PerimeterEstimate facet_shell_perimeter(Polytope const& polytope, MeasureSpec const& m, std::size_t samples,
                                        double eps, std::uint64_t seed, ShellSide side = ShellSide::automatic);

// Same scheme driven by the exact Euclidean distance to a named body.
PerimeterEstimate generic_shell_perimeter(NamedBody const& body, MeasureSpec const& m, std::size_t samples,
                                          double eps, std::uint64_t seed, ShellSide side = ShellSide::automatic);

// Gaussian perimeter of a hyperplane: phi(signed distance / scale) / scale.
PerimeterEstimate halfspace_perimeter_exact(Halfspace const& h, MeasureSpec const& m);

// lim_{eps->0} P(<y, Y> in [rho, rho + eps|Y|]) / eps for standard Gaussian Y,
// with the exact factor E|Y| in place of its sqrt(n) asymptotic.
double gaussian_shell_rate(int n, double y_norm, double rho);

// Shell width used when none is given: 5% of the measure's length scale.
double default_eps(MeasureSpec const& m);

ShellSide resolve_side(ShellSide side, MeasureSpec const& m);

}  // namespace maxperim
