#include "maxperim/perimeter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "maxperim/errors.hpp"
#include "maxperim/parallel.hpp"
#include "maxperim/special.hpp"

namespace maxperim {

namespace {

constexpr std::size_t kMinSamples = 10'000;

// Per-sample contribution to the extrapolated estimate is D / eps with
// D = 4 k_fine - k_coarse, where k_* count the shells containing the sample.
// Everything is integral, so chunk tallies combine exactly in any order.
struct ShellTally {
  std::int64_t coarse = 0;
  std::int64_t fine = 0;
  std::int64_t d_sum = 0;
  std::int64_t d_sq_sum = 0;
  std::int64_t hits = 0;
  std::int64_t overlaps = 0;

  void add(int k_coarse, int k_fine, int in_two_or_more) {
    std::int64_t const d = 4 * k_fine - k_coarse;
    coarse += k_coarse;
    fine += k_fine;
    d_sum += d;
    d_sq_sum += d * d;
    hits += k_coarse > 0 ? 1 : 0;
    overlaps += in_two_or_more;
  }

  ShellTally& operator+=(ShellTally const& o) {
    coarse += o.coarse;
    fine += o.fine;
    d_sum += o.d_sum;
    d_sq_sum += o.d_sq_sum;
    hits += o.hits;
    overlaps += o.overlaps;
    return *this;
  }
};

void check_common(MeasureSpec const& m, int body_dim, std::size_t samples, double eps, char const* who) {
  if (body_dim != m.dim()) throw InputError(std::string(who) + ": body and measure dimensions differ");
  if (samples < kMinSamples) throw InputError(std::string(who) + ": at least 10^4 samples are required");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InputError(std::string(who) + ": eps must be positive");
}

// Runs `per_sample(z, tally)` over all base-law samples, chunk by chunk.
template <class PerSample>
ShellTally tally_samples(MeasureSpec const& m, std::size_t samples, std::uint64_t seed, PerSample&& per_sample) {
  std::size_t const n = static_cast<std::size_t>(m.dim());
  std::size_t const chunks = (samples + kSampleChunk - 1) / kSampleChunk;
  std::vector<ShellTally> tallies(chunks);
  parallel_for(chunks, [&](std::size_t k) {
    std::size_t const count = std::min(kSampleChunk, samples - k * kSampleChunk);
    std::vector<double> z(count * n);
    sample_base_chunk(m, seed, k, count, z);
    ShellTally t;
    for (std::size_t s = 0; s < count; ++s) per_sample(ConstPoint(z).subspan(s * n, n), t);
    tallies[k] = t;
  });
  ShellTally total;
  for (auto const& t : tallies) total += t;
  return total;
}

PerimeterEstimate finish(ShellTally const& t, std::size_t samples, double eps, PerimeterMethod method,
                         ShellSide side) {
  double const s = static_cast<double>(samples);
  PerimeterEstimate e;
  e.eps = eps;
  e.samples = samples;
  e.method = method;
  e.side = side;
  e.coarse_value = static_cast<double>(t.coarse) / (s * eps);
  e.fine_value = 2.0 * static_cast<double>(t.fine) / (s * eps);
  e.shell_hits = static_cast<std::size_t>(t.hits);
  e.overlap_hits = static_cast<std::size_t>(t.overlaps);
  e.overlap_warning = t.hits > 0 && static_cast<double>(t.overlaps) > 0.01 * static_cast<double>(t.hits);
  if (t.coarse == 0) {
    e.value = 0.0;
    e.std_error = 3.0 / (s * eps);  // rule of three
    e.zero_hits = true;
    return e;
  }
  double const mean_d = static_cast<double>(t.d_sum) / s;
  double const var_d =
      std::max(0.0, (static_cast<double>(t.d_sq_sum) - s * mean_d * mean_d) / (s - 1.0));
  e.value = std::max(0.0, mean_d / eps);
  e.std_error = std::sqrt(var_d / s) / eps;
  return e;
}

}  // namespace

std::string to_string(PerimeterMethod method) {
  switch (method) {
    case PerimeterMethod::facet_shell: return "facet_shell";
    case PerimeterMethod::generic_shell: return "generic_shell";
    case PerimeterMethod::closed_form: return "closed_form";
  }
  return "unknown";
}

std::string to_string(ShellSide side) {
  switch (side) {
    case ShellSide::automatic: return "automatic";
    case ShellSide::outer: return "outer";
    case ShellSide::inner: return "inner";
  }
  return "unknown";
}

ShellSide resolve_side(ShellSide side, MeasureSpec const& m) {
  if (side != ShellSide::automatic) return side;
  return m.family() == Family::uniform ? ShellSide::inner : ShellSide::outer;
}

double default_eps(MeasureSpec const& m) { return 0.05 * m.length_scale(); }

PerimeterEstimate facet_shell_perimeter(Polytope const& polytope, MeasureSpec const& m, std::size_t samples,
                                        double eps, std::uint64_t seed, ShellSide side) {
  check_common(m, polytope.dim(), samples, eps, "facet_shell_perimeter");
  side = resolve_side(side, m);

  // Work in the frame of the base law: X = shift + scale Z.
  Polytope const local = std::get<Polytope>(to_standard_frame(Body(polytope), m.shift(), m.scale()));
  std::size_t const facets = local.facet_count();
  std::size_t const n = static_cast<std::size_t>(local.dim());
  double const local_eps = eps / m.scale();
  std::vector<double> coarse_width(facets), fine_width(facets);
  for (std::size_t i = 0; i < facets; ++i) {
    coarse_width[i] = local_eps * local.normal_norm(i);
    fine_width[i] = 0.5 * local_eps * local.normal_norm(i);
  }
  auto const normals = local.normals_row_major();
  auto const offsets = local.offsets();
  bool const outer = side == ShellSide::outer;

  auto per_sample = [&](ConstPoint z, ShellTally& t) {
    thread_local std::vector<double> margins;
    margins.resize(facets);
    int positive = 0;
    for (std::size_t i = 0; i < facets; ++i) {
      double const* row = normals.data() + i * n;
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += row[j] * z[j];
      margins[i] = acc - offsets[i];
      positive += margins[i] > 0.0 ? 1 : 0;
    }
    if (outer) {
      // F_i requires every other margin <= 0, so at most one outer shell
      // can hold the sample. Samples just outside two or more facets form
      // the neglected corner mass.
      if (positive == 1) {
        std::size_t const i = static_cast<std::size_t>(
            std::find_if(margins.begin(), margins.end(), [](double v) { return v > 0.0; }) - margins.begin());
        int const kc = margins[i] <= coarse_width[i] ? 1 : 0;
        int const kf = margins[i] <= fine_width[i] ? 1 : 0;
        t.add(kc, kf, 0);
      } else if (positive >= 2) {
        int near = 0;
        for (std::size_t i = 0; i < facets; ++i)
          if (margins[i] > 0.0 && margins[i] <= coarse_width[i]) ++near;
        t.add(0, 0, near >= 2 ? 1 : 0);
      } else {
        t.add(0, 0, 0);
      }
    } else {
      if (positive > 0) {
        t.add(0, 0, 0);
        return;
      }
      int kc = 0, kf = 0;
      for (std::size_t i = 0; i < facets; ++i) {
        if (margins[i] > -coarse_width[i]) ++kc;
        if (margins[i] > -fine_width[i]) ++kf;
      }
      t.add(kc, kf, kc >= 2 ? 1 : 0);
    }
  };

  ShellTally const tally = tally_samples(m, samples, seed, per_sample);
  return finish(tally, samples, eps, PerimeterMethod::facet_shell, side);
}

PerimeterEstimate generic_shell_perimeter(NamedBody const& body, MeasureSpec const& m, std::size_t samples,
                                          double eps, std::uint64_t seed, ShellSide side) {
  check_common(m, dimension(body), samples, eps, "generic_shell_perimeter");
  side = resolve_side(side, m);
  NamedBody const local = to_standard_frame(body, m.shift(), m.scale());
  double const coarse = eps / m.scale();
  double const fine = 0.5 * coarse;
  bool const outer = side == ShellSide::outer;

  auto per_sample = [&](ConstPoint z, ShellTally& t) {
    double const d = signed_distance(local, z);
    if (outer) {
      t.add(d > 0.0 && d <= coarse ? 1 : 0, d > 0.0 && d <= fine ? 1 : 0, 0);
    } else {
      t.add(d <= 0.0 && d > -coarse ? 1 : 0, d <= 0.0 && d > -fine ? 1 : 0, 0);
    }
  };

  ShellTally const tally = tally_samples(m, samples, seed, per_sample);
  return finish(tally, samples, eps, PerimeterMethod::generic_shell, side);
}

PerimeterEstimate halfspace_perimeter_exact(Halfspace const& h, MeasureSpec const& m) {
  if (m.family() != Family::gaussian)
    throw UnsupportedError("halfspace_perimeter_exact: only Gaussian measures have this closed form");
  if (h.dim() != m.dim()) throw InputError("halfspace_perimeter_exact: dimension mismatch");
  double const distance = (h.offset() - dot(m.shift(), h.normal())) / h.normal_norm();
  PerimeterEstimate e;
  e.value = normal_pdf(distance / m.scale()) / m.scale();
  e.std_error = 0.0;
  e.method = PerimeterMethod::closed_form;
  e.coarse_value = e.fine_value = e.value;
  return e;
}

double gaussian_shell_rate(int n, double y_norm, double rho) {
  if (!(y_norm > 0.0)) throw InputError("gaussian_shell_rate: |y| must be positive");
  return gaussian_norm_mean(n) / kSqrt2Pi / y_norm * std::exp(-rho * rho / (2.0 * y_norm * y_norm));
}

}  // namespace maxperim
