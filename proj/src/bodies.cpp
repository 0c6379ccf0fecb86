#include "maxperim/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "maxperim/errors.hpp"
#include "maxperim/parallel.hpp"
#include "maxperim/random.hpp"
#include "maxperim/simplex.hpp"
#include "maxperim/special.hpp"

namespace maxperim {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_dim(int expected, std::size_t got, char const* what) {
  if (static_cast<std::size_t>(expected) != got)
    throw InputError(std::string(what) + ": dimension mismatch (expected " + std::to_string(expected) +
                     ", got " + std::to_string(got) + ")");
}

void require_finite(ConstPoint v, char const* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw InputError(std::string(what) + ": non-finite coordinate");
}

constexpr std::size_t kVolumeChunk = 16384;

}  // namespace

double dot(ConstPoint a, ConstPoint b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm(ConstPoint a) { return std::sqrt(dot(a, a)); }

Halfspace::Halfspace(Vector normal, double offset)
    : normal_(std::move(normal)), offset_(offset), normal_norm_(norm(normal_)) {
  if (normal_.empty()) throw InputError("Halfspace: empty normal");
  require_finite(normal_, "Halfspace normal");
  if (!(normal_norm_ > 0.0)) throw InputError("Halfspace: normal must be nonzero");
  if (!std::isfinite(offset_)) throw InputError("Halfspace: offset must be finite");
}

Ball::Ball(int dim, double radius) : Ball(radius, Vector(dim > 0 ? static_cast<std::size_t>(dim) : 0, 0.0)) {
  if (dim <= 0) throw InputError("Ball: dimension must be positive");
}

Ball::Ball(double radius, Vector center) : radius_(radius), center_(std::move(center)) {
  if (center_.empty()) throw InputError("Ball: dimension must be positive");
  if (!(radius_ > 0.0) || !std::isfinite(radius_)) throw InputError("Ball: radius must be positive");
  require_finite(center_, "Ball center");
}

Box::Box(Vector half_widths) : Box(half_widths, Vector(half_widths.size(), 0.0)) {}

Box::Box(Vector half_widths, Vector center)
    : half_widths_(std::move(half_widths)), center_(std::move(center)) {
  if (half_widths_.empty()) throw InputError("Box: dimension must be positive");
  require_dim(dim(), center_.size(), "Box center");
  for (double h : half_widths_)
    if (!(h > 0.0) || !std::isfinite(h)) throw InputError("Box: half-widths must be positive");
  require_finite(center_, "Box center");
}

Box Box::cube(int dim, double half_width) {
  if (dim <= 0) throw InputError("Box: dimension must be positive");
  return Box(Vector(static_cast<std::size_t>(dim), half_width));
}

Polytope::Polytope(std::vector<Halfspace> const& facets, std::optional<BoundingBox> bounding_box)
    : dim_(0), bounding_box_(std::move(bounding_box)) {
  if (facets.empty()) throw InputError("Polytope: at least one facet is required");
  dim_ = facets.front().dim();
  normals_.reserve(facets.size() * static_cast<std::size_t>(dim_));
  for (auto const& h : facets) {
    require_dim(dim_, static_cast<std::size_t>(h.dim()), "Polytope facet");
    normals_.insert(normals_.end(), h.normal().begin(), h.normal().end());
    offsets_.push_back(h.offset());
    norms_.push_back(h.normal_norm());
  }
  if (bounding_box_) {
    require_dim(dim_, bounding_box_->lower.size(), "Polytope bounding box");
    require_dim(dim_, bounding_box_->upper.size(), "Polytope bounding box");
    for (int i = 0; i < dim_; ++i)
      if (!(bounding_box_->upper[i] > bounding_box_->lower[i]))
        throw InputError("Polytope bounding box: upper must exceed lower");
  }
}

Halfspace Polytope::facet(std::size_t i) const {
  auto n = normal(i);
  return Halfspace(Vector(n.begin(), n.end()), offsets_[i]);
}

int dimension(Body const& body) {
  return std::visit([](auto const& b) { return b.dim(); }, body);
}

int dimension(NamedBody const& body) {
  return std::visit([](auto const& b) { return b.dim(); }, body);
}

Body to_body(NamedBody const& body) {
  return std::visit([](auto const& b) -> Body { return b; }, body);
}

std::optional<NamedBody> as_named(Body const& body) {
  return std::visit(Overloaded{
                        [](Polytope const&) -> std::optional<NamedBody> { return std::nullopt; },
                        [](auto const& b) -> std::optional<NamedBody> { return NamedBody(b); },
                    },
                    body);
}

void facet_margins(Polytope const& polytope, ConstPoint x, std::span<double> out) {
  require_dim(polytope.dim(), x.size(), "facet_margins");
  if (out.size() != polytope.facet_count()) throw InputError("facet_margins: output size mismatch");
  for (std::size_t i = 0; i < polytope.facet_count(); ++i)
    out[i] = dot(x, polytope.normal(i)) - polytope.offset(i);
}

Vector facet_margins(Polytope const& polytope, ConstPoint x) {
  Vector out(polytope.facet_count());
  facet_margins(polytope, x, out);
  return out;
}

bool contains(Body const& body, ConstPoint x) {
  require_dim(dimension(body), x.size(), "contains");
  return std::visit(
      Overloaded{
          [&](Ball const& b) {
            double d2 = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) d2 += (x[i] - b.center()[i]) * (x[i] - b.center()[i]);
            return d2 <= b.radius() * b.radius();
          },
          [&](Box const& b) {
            for (std::size_t i = 0; i < x.size(); ++i)
              if (std::abs(x[i] - b.center()[i]) > b.half_widths()[i]) return false;
            return true;
          },
          [&](Halfspace const& h) { return dot(x, h.normal()) <= h.offset(); },
          [&](Polytope const& p) {
            for (std::size_t i = 0; i < p.facet_count(); ++i)
              if (dot(x, p.normal(i)) > p.offset(i)) return false;
            return true;
          },
      },
      body);
}

Inradius chebyshev_inradius(Polytope const& polytope) {
  std::size_t const n = static_cast<std::size_t>(polytope.dim());
  std::size_t const m = polytope.facet_count();

  // Unit normals a_i and offsets b_i = rho_i / |theta_i|. The shift
  // r = r0 + s with r0 = min_i b_i makes z = 0 feasible, so a single phase suffices.
  Vector b(m);
  for (std::size_t i = 0; i < m; ++i) b[i] = polytope.offset(i) / polytope.normal_norm(i);
  double const r0 = *std::min_element(b.begin(), b.end());

  // Variables: x+ (n), x- (n), s (1).
  std::size_t const vars = 2 * n + 1;
  std::vector<double> a(m * vars, 0.0);
  Vector rhs(m);
  for (std::size_t i = 0; i < m; ++i) {
    auto const theta = polytope.normal(i);
    double const inv = 1.0 / polytope.normal_norm(i);
    for (std::size_t j = 0; j < n; ++j) {
      a[i * vars + j] = theta[j] * inv;
      a[i * vars + n + j] = -theta[j] * inv;
    }
    a[i * vars + 2 * n] = 1.0;
    rhs[i] = b[i] - r0;
  }
  Vector c(vars, 0.0);
  c[2 * n] = 1.0;

  auto const result = lp::maximize(a, rhs, c);
  Inradius out;
  out.center.assign(n, 0.0);
  if (result.status == lp::Status::unbounded) {
    out.radius = std::numeric_limits<double>::infinity();
    out.unbounded = true;
    return out;
  }
  if (result.status == lp::Status::iteration_limit)
    throw NumericalError("chebyshev_inradius: simplex iteration limit reached");

  for (std::size_t j = 0; j < n; ++j) out.center[j] = result.solution[j] - result.solution[n + j];
  out.radius = r0 + result.objective;
  double const tol = 1e-9 * std::max(1.0, std::abs(r0));
  if (out.radius < -tol) throw EmptyBodyError("chebyshev_inradius: polytope is empty");
  out.radius = std::max(0.0, out.radius);
  return out;
}

double inradius(Body const& body) {
  return std::visit(Overloaded{
                        [](Ball const& b) { return b.radius(); },
                        [](Box const& b) {
                          return *std::min_element(b.half_widths().begin(), b.half_widths().end());
                        },
                        [](Halfspace const&) { return std::numeric_limits<double>::infinity(); },
                        [](Polytope const& p) { return chebyshev_inradius(p).radius; },
                    },
                    body);
}

VolumeEstimate body_volume(Body const& body, std::size_t samples, std::uint64_t seed) {
  return std::visit(
      Overloaded{
          [](Ball const& b) {
            return VolumeEstimate{unit_ball_volume(b.dim()) * std::pow(b.radius(), b.dim()), 0.0};
          },
          [](Box const& b) {
            double v = 1.0;
            for (double h : b.half_widths()) v *= 2.0 * h;
            return VolumeEstimate{v, 0.0};
          },
          [](Halfspace const&) -> VolumeEstimate {
            throw UnsupportedError("body_volume: halfspaces have infinite volume");
          },
          [&](Polytope const& p) {
            if (!p.bounding_box())
              throw InputError("body_volume: Monte Carlo polytope volume needs a bounding box");
            if (p.dim() > 10)
              throw InputError("body_volume: Monte Carlo polytope volume is limited to dimension <= 10");
            if (samples == 0) throw InputError("body_volume: samples must be positive");
            auto const& box = *p.bounding_box();
            std::size_t const n = static_cast<std::size_t>(p.dim());
            double box_volume = 1.0;
            for (std::size_t j = 0; j < n; ++j) box_volume *= box.upper[j] - box.lower[j];

            std::size_t const chunks = (samples + kVolumeChunk - 1) / kVolumeChunk;
            std::vector<std::size_t> hits(chunks, 0);
            parallel_for(chunks, [&](std::size_t k) {
              Engine rng = substream(seed, StreamTag::volume, k);
              std::uniform_real_distribution<double> unit(0.0, 1.0);
              std::size_t const count = std::min(kVolumeChunk, samples - k * kVolumeChunk);
              Vector x(n);
              std::size_t h = 0;
              for (std::size_t s = 0; s < count; ++s) {
                for (std::size_t j = 0; j < n; ++j) x[j] = box.lower[j] + (box.upper[j] - box.lower[j]) * unit(rng);
                if (contains(p, x)) ++h;
              }
              hits[k] = h;
            });
            double const total = static_cast<double>(std::accumulate(hits.begin(), hits.end(), std::size_t{0}));
            double const frac = total / static_cast<double>(samples);
            return VolumeEstimate{box_volume * frac,
                                  box_volume * std::sqrt(frac * (1.0 - frac) / static_cast<double>(samples))};
          },
      },
      body);
}

double body_surface_area(Body const& body) {
  return std::visit(
      Overloaded{
          [](Ball const& b) {
            int const n = b.dim();
            return n * unit_ball_volume(n) * std::pow(b.radius(), n - 1);
          },
          [](Box const& b) {
            auto const& h = b.half_widths();
            double total = 0.0;
            for (std::size_t i = 0; i < h.size(); ++i) {
              double face = 1.0;
              for (std::size_t j = 0; j < h.size(); ++j)
                if (j != i) face *= 2.0 * h[j];
              total += 2.0 * face;
            }
            return total;
          },
          [](auto const&) -> double {
            throw UnsupportedError("body_surface_area: only balls and boxes have closed forms");
          },
      },
      body);
}

Polytope box_as_polytope(Box const& box) {
  std::vector<Halfspace> facets;
  std::size_t const n = static_cast<std::size_t>(box.dim());
  BoundingBox bb{Vector(n), Vector(n)};
  for (std::size_t j = 0; j < n; ++j) {
    Vector e(n, 0.0);
    e[j] = 1.0;
    facets.emplace_back(e, box.center()[j] + box.half_widths()[j]);
    e[j] = -1.0;
    facets.emplace_back(e, box.half_widths()[j] - box.center()[j]);
    bb.lower[j] = box.center()[j] - box.half_widths()[j];
    bb.upper[j] = box.center()[j] + box.half_widths()[j];
  }
  return Polytope(facets, bb);
}

double signed_distance(NamedBody const& body, ConstPoint x) {
  require_dim(dimension(body), x.size(), "signed_distance");
  return std::visit(
      Overloaded{
          [&](Ball const& b) {
            double d2 = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) d2 += (x[i] - b.center()[i]) * (x[i] - b.center()[i]);
            return std::sqrt(d2) - b.radius();
          },
          [&](Box const& b) {
            double outside2 = 0.0;
            double depth = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < x.size(); ++i) {
              double const gap = std::abs(x[i] - b.center()[i]) - b.half_widths()[i];
              if (gap > 0.0) outside2 += gap * gap;
              depth = std::min(depth, -gap);
            }
            return outside2 > 0.0 ? std::sqrt(outside2) : -depth;
          },
          [&](Halfspace const& h) { return (dot(x, h.normal()) - h.offset()) / h.normal_norm(); },
      },
      body);
}

namespace {

Vector map_to_standard(ConstPoint p, ConstPoint shift, double scale) {
  Vector out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = (p[i] - shift[i]) / scale;
  return out;
}

Vector map_from_standard(ConstPoint p, ConstPoint shift, double scale) {
  Vector out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = shift[i] + scale * p[i];
  return out;
}

void check_frame(int dim, ConstPoint shift, double scale) {
  require_dim(dim, shift.size(), "frame shift");
  if (!(scale > 0.0)) throw InputError("frame scale must be positive");
}

}  // namespace

Body to_standard_frame(Body const& body, ConstPoint shift, double scale) {
  check_frame(dimension(body), shift, scale);
  return std::visit(
      Overloaded{
          [&](Ball const& b) -> Body { return Ball(b.radius() / scale, map_to_standard(b.center(), shift, scale)); },
          [&](Box const& b) -> Body {
            Vector h = b.half_widths();
            for (double& v : h) v /= scale;
            return Box(h, map_to_standard(b.center(), shift, scale));
          },
          // <x, theta> <= rho with x = shift + scale z  <=>  <z, theta> <= (rho - <shift, theta>) / scale
          [&](Halfspace const& h) -> Body {
            return Halfspace(h.normal(), (h.offset() - dot(shift, h.normal())) / scale);
          },
          [&](Polytope const& p) -> Body {
            std::vector<Halfspace> facets;
            facets.reserve(p.facet_count());
            for (std::size_t i = 0; i < p.facet_count(); ++i) {
              auto const theta = p.normal(i);
              facets.emplace_back(Vector(theta.begin(), theta.end()), (p.offset(i) - dot(shift, theta)) / scale);
            }
            std::optional<BoundingBox> bb;
            if (p.bounding_box())
              bb = BoundingBox{map_to_standard(p.bounding_box()->lower, shift, scale),
                               map_to_standard(p.bounding_box()->upper, shift, scale)};
            return Polytope(facets, bb);
          },
      },
      body);
}

NamedBody to_standard_frame(NamedBody const& body, ConstPoint shift, double scale) {
  return *as_named(to_standard_frame(to_body(body), shift, scale));
}

Body from_standard_frame(Body const& body, ConstPoint shift, double scale) {
  check_frame(dimension(body), shift, scale);
  return std::visit(
      Overloaded{
          [&](Ball const& b) -> Body { return Ball(b.radius() * scale, map_from_standard(b.center(), shift, scale)); },
          [&](Box const& b) -> Body {
            Vector h = b.half_widths();
            for (double& v : h) v *= scale;
            return Box(h, map_from_standard(b.center(), shift, scale));
          },
          [&](Halfspace const& h) -> Body {
            return Halfspace(h.normal(), dot(shift, h.normal()) + scale * h.offset());
          },
          [&](Polytope const& p) -> Body {
            std::vector<Halfspace> facets;
            facets.reserve(p.facet_count());
            for (std::size_t i = 0; i < p.facet_count(); ++i) {
              auto const theta = p.normal(i);
              facets.emplace_back(Vector(theta.begin(), theta.end()), dot(shift, theta) + scale * p.offset(i));
            }
            std::optional<BoundingBox> bb;
            if (p.bounding_box())
              bb = BoundingBox{map_from_standard(p.bounding_box()->lower, shift, scale),
                               map_from_standard(p.bounding_box()->upper, shift, scale)};
            return Polytope(facets, bb);
          },
      },
      body);
}

}  // namespace maxperim
