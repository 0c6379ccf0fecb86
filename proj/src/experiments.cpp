#include "maxperim/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "maxperim/parallel.hpp"

#ifndef MAXPERIM_VERSION
#define MAXPERIM_VERSION "0.1.0"
#endif

namespace maxperim::experiments {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string join(std::string const& where, std::string const& key) { return where.empty() ? key : where + "." + key; }

json const* find(json const& j, char const* key) {
  auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

double get_number(json const& j, char const* key, std::string const& where) {
  json const* v = find(j, key);
  if (!v) throw ConfigError(join(where, key), "missing required number");
  if (!v->is_number()) throw ConfigError(join(where, key), "expected a number");
  return v->get<double>();
}

double get_number_or(json const& j, char const* key, std::string const& where, double fallback) {
  return find(j, key) ? get_number(j, key, where) : fallback;
}

std::optional<double> get_optional_number(json const& j, char const* key, std::string const& where) {
  if (!find(j, key)) return std::nullopt;
  return get_number(j, key, where);
}

std::uint64_t get_unsigned_or(json const& j, char const* key, std::string const& where, std::uint64_t fallback) {
  json const* v = find(j, key);
  if (!v) return fallback;
  if (!v->is_number_integer() || (v->is_number_integer() && !v->is_number_unsigned() && v->get<std::int64_t>() < 0))
    throw ConfigError(join(where, key), "expected a nonnegative integer");
  return v->get<std::uint64_t>();
}

int get_int(json const& j, char const* key, std::string const& where) {
  json const* v = find(j, key);
  if (!v) throw ConfigError(join(where, key), "missing required integer");
  if (!v->is_number_integer()) throw ConfigError(join(where, key), "expected an integer");
  return v->get<int>();
}

std::string get_string_or(json const& j, char const* key, std::string const& where, std::string fallback) {
  json const* v = find(j, key);
  if (!v) return fallback;
  if (!v->is_string()) throw ConfigError(join(where, key), "expected a string");
  return v->get<std::string>();
}

Vector get_vector(json const& j, char const* key, std::string const& where, std::optional<std::size_t> size) {
  json const* v = find(j, key);
  std::string const path = join(where, key);
  if (!v) throw ConfigError(path, "missing required array");
  if (!v->is_array()) throw ConfigError(path, "expected an array of numbers");
  Vector out;
  for (std::size_t i = 0; i < v->size(); ++i) {
    if (!(*v)[i].is_number()) throw ConfigError(path + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back((*v)[i].get<double>());
  }
  if (size && out.size() != *size)
    throw ConfigError(path, "expected " + std::to_string(*size) + " entries, got " + std::to_string(out.size()));
  return out;
}

Vector get_vector_or_zero(json const& j, char const* key, std::string const& where, std::size_t size) {
  if (!find(j, key)) return Vector(size, 0.0);
  return get_vector(j, key, where, size);
}

void require_object(json const& j, std::string const& where) {
  if (!j.is_object()) throw ConfigError(where, "expected an object");
}

// Rethrows library input errors as configuration errors at `where`.
template <class F>
auto guarded(std::string const& where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (ConfigError const&) {
    throw;
  } catch (InputError const& e) {
    throw ConfigError(where, e.what());
  } catch (UnsupportedError const& e) {
    throw ConfigError(where, e.what());
  }
}

NamedBody named_body_from_json(json const& j, int dim, std::string const& where) {
  require_object(j, where);
  std::string const kind = get_string_or(j, "kind", where, "");
  auto const n = static_cast<std::size_t>(dim);
  return guarded(where, [&]() -> NamedBody {
    if (kind == "ball") return Ball(get_number(j, "radius", where), get_vector_or_zero(j, "center", where, n));
    if (kind == "cube") {
      double const h = get_number_or(j, "halfwidth", where, 0.5);
      return Box(Vector(n, h), get_vector_or_zero(j, "center", where, n));
    }
    if (kind == "box") return Box(get_vector(j, "halfwidths", where, n), get_vector_or_zero(j, "center", where, n));
    if (kind == "halfspace") return Halfspace(get_vector(j, "normal", where, n), get_number(j, "offset", where));
    if (kind.empty()) throw ConfigError(join(where, "kind"), "missing body kind");
    throw ConfigError(join(where, "kind"), "unknown body kind '" + kind + "'");
  });
}

std::string csv_field(std::string const& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string describe_body(Body const& body) {
  std::ostringstream os;
  std::visit([&](auto const& b) {
    using B = std::decay_t<decltype(b)>;
    if constexpr (std::is_same_v<B, Ball>) {
      os << "ball(n=" << b.dim() << ",r=" << b.radius() << ")";
    } else if constexpr (std::is_same_v<B, Box>) {
      os << "box(n=" << b.dim() << ")";
    } else if constexpr (std::is_same_v<B, Halfspace>) {
      os << "halfspace(n=" << b.dim() << ",offset=" << b.offset() << ")";
    } else {
      os << "polytope(n=" << b.dim() << ",N=" << b.facet_count() << ")";
    }
  }, body);
  return os.str();
}

std::vector<std::string> split_csv_line(std::string const& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char const c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

}  // namespace

ConfigError::ConfigError(std::string f, std::string const& message)
    : InputError("config error at '" + f + "': " + message), field(std::move(f)) {}

std::string version_string() { return MAXPERIM_VERSION; }

MeasureSpec measure_from_json(json const& j, int dim_override, std::string const& where) {
  if (j.is_string()) return measure_from_json(json{{"family", j}}, dim_override, where);
  require_object(j, where);
  std::string const family = get_string_or(j, "family", where, "");
  int const dim = dim_override > 0 ? dim_override : get_int(j, "dim", where);
  if (dim < 1) throw ConfigError(join(where, "dim"), "must be positive");
  auto const n = static_cast<std::size_t>(dim);
  Vector shift = get_vector_or_zero(j, "shift", where, n);
  double const scale = get_number_or(j, "scale", where, 1.0);
  return guarded(where, [&]() -> MeasureSpec {
    if (family == "gaussian") return MeasureSpec::gaussian(dim, shift, scale);
    if (family == "pnorm") return MeasureSpec::pnorm(dim, get_number(j, "p", where), shift, scale);
    if (family == "uniform") {
      json const* body = find(j, "body");
      NamedBody const named = body ? named_body_from_json(*body, dim, join(where, "body"))
                                   : NamedBody(Box::cube(dim, 0.5));
      return MeasureSpec::uniform(named, shift, scale);
    }
    if (family.empty()) throw ConfigError(join(where, "family"), "missing measure family");
    throw ConfigError(join(where, "family"), "unknown family '" + family + "' (gaussian, pnorm, uniform)");
  });
}

Body body_from_json(json const& j, MeasureSpec const& m, std::uint64_t seed, std::string const& where) {
  require_object(j, where);
  std::string const kind = get_string_or(j, "kind", where, "");
  int const dim = m.dim();
  auto const n = static_cast<std::size_t>(dim);
  if (kind == "polytope") {
    json const* facets = find(j, "facets");
    if (!facets || !facets->is_array() || facets->empty())
      throw ConfigError(join(where, "facets"), "expected a nonempty array of {normal, offset}");
    std::vector<Halfspace> hs;
    for (std::size_t i = 0; i < facets->size(); ++i) {
      std::string const fw = join(where, "facets") + "[" + std::to_string(i) + "]";
      require_object((*facets)[i], fw);
      hs.push_back(guarded(fw, [&] {
        return Halfspace(get_vector((*facets)[i], "normal", fw, n), get_number((*facets)[i], "offset", fw));
      }));
    }
    std::optional<BoundingBox> bbox;
    if (json const* b = find(j, "bbox")) {
      std::string const bw = join(where, "bbox");
      require_object(*b, bw);
      bbox = BoundingBox{get_vector(*b, "lower", bw, n), get_vector(*b, "upper", bw, n)};
    }
    return guarded(where, [&] { return Polytope(hs, bbox); });
  }
  if (kind == "nazarov") {
    std::uint64_t const body_seed = get_unsigned_or(j, "seed", where, seed);
    auto const budget = static_cast<std::size_t>(get_unsigned_or(j, "stats_budget", where, 200'000));
    auto const alpha = get_optional_number(j, "alpha", where);
    auto const beta = get_optional_number(j, "beta", where);
    return guarded(where, [&] {
      RadialStats const stats = radial_stats(m, budget, body_seed);
      double const a = alpha.value_or(stats.norm_sd() / stats.mean_norm);
      return Body(build_polytope(make_params(stats, a, beta), dim, body_seed));
    });
  }
  return to_body(named_body_from_json(j, dim, where));
}

json to_json(PerimeterEstimate const& e) {
  return json{{"value", finite_or_null(e.value)},
              {"stderr", finite_or_null(e.std_error)},
              {"eps", e.eps},
              {"samples", e.samples},
              {"method", to_string(e.method)},
              {"side", to_string(e.side)},
              {"coarse_value", finite_or_null(e.coarse_value)},
              {"fine_value", finite_or_null(e.fine_value)},
              {"shell_hits", e.shell_hits},
              {"overlap_hits", e.overlap_hits},
              {"overlap_warning", e.overlap_warning},
              {"zero_hits", e.zero_hits}};
}

json to_json(BoundReport const& report) {
  json bounds = json::array();
  for (auto const& b : report.bounds_applied) {
    bounds.push_back(json{{"name", b.name},
                          {"value", finite_or_null(b.value)},
                          {"kind", to_string(b.kind)},
                          {"note", b.note}});
  }
  return json{{"target", {{"measure", report.measure}, {"body", report.body}}},
              {"lower", {{"value", finite_or_null(report.lower)}, {"source", report.lower_source}}},
              {"upper", {{"value", finite_or_null(report.upper)}, {"source", report.upper_source}}},
              {"empirical", report.empirical ? to_json(*report.empirical) : json(nullptr)},
              {"bounds_applied", bounds},
              {"version", version_string()}};
}

FitResult fit_exponent(std::vector<std::pair<double, double>> const& rows) {
  if (rows.size() < 3) throw InputError("fit_exponent: need at least 3 rows");
  FitResult fit;
  for (auto const& [n, value] : rows) {
    if (!(n > 0.0) || !std::isfinite(n)) throw InputError("fit_exponent: n must be positive");
    if (!(value > 0.0) || !std::isfinite(value)) throw InputError("fit_exponent: values must be positive");
    fit.points.emplace_back(std::log(n), std::log(value));
  }
  double const k = static_cast<double>(fit.points.size());
  double mx = 0.0, my = 0.0;
  for (auto const& [x, y] : fit.points) {
    mx += x;
    my += y;
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (auto const& [x, y] : fit.points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (!(sxx > 0.0)) throw InputError("fit_exponent: need at least two distinct n");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (auto const& [x, y] : fit.points) {
    double const r = y - (fit.intercept + fit.slope * x);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return fit;
}

// ---- perimeter ---------------------------------------------------------

namespace {

PerimeterJob job_from_json(json const& j, std::string const& where) {
  require_object(j, where);
  PerimeterJob job;
  json const* measure = find(j, "measure");
  json const* body = find(j, "body");
  if (!measure) throw ConfigError(join(where, "measure"), "missing measure");
  if (!body) throw ConfigError(join(where, "body"), "missing body");
  job.measure = *measure;
  job.body = *body;
  job.method = get_string_or(j, "method", where, "auto");
  job.side = get_string_or(j, "side", where, "auto");
  return job;
}

std::size_t get_samples(json const& j, std::size_t fallback) {
  auto const s = static_cast<std::size_t>(get_unsigned_or(j, "samples", "", fallback));
  if (s < 10'000) throw ConfigError("samples", "must be at least 10000");
  return s;
}

ShellSide parse_side(std::string const& s, std::string const& where) {
  if (s == "auto" || s == "automatic") return ShellSide::automatic;
  if (s == "outer") return ShellSide::outer;
  if (s == "inner") return ShellSide::inner;
  throw ConfigError(where, "unknown shell side '" + s + "' (auto, outer, inner)");
}

}  // namespace

PerimeterConfig perimeter_config_from_json(json const& j) {
  require_object(j, "");
  PerimeterConfig config;
  config.samples = get_samples(j, config.samples);
  config.seed = get_unsigned_or(j, "seed", "", config.seed);
  config.eps = get_optional_number(j, "eps", "");
  if (config.eps && !(*config.eps > 0.0)) throw ConfigError("eps", "must be positive");
  if (json const* jobs = find(j, "jobs")) {
    if (!jobs->is_array() || jobs->empty()) throw ConfigError("jobs", "expected a nonempty array");
    for (std::size_t i = 0; i < jobs->size(); ++i)
      config.jobs.push_back(job_from_json((*jobs)[i], "jobs[" + std::to_string(i) + "]"));
  } else {
    config.jobs.push_back(job_from_json(j, ""));
  }
  for (std::size_t i = 0; i < config.jobs.size(); ++i) {
    std::string const where = config.jobs.size() > 1 ? "jobs[" + std::to_string(i) + "]" : "";
    auto const& m = config.jobs[i].method;
    if (m != "auto" && m != "facet_shell" && m != "generic_shell" && m != "closed_form")
      throw ConfigError(join(where, "method"), "unknown method '" + m + "'");
    parse_side(config.jobs[i].side, join(where, "side"));
  }
  return config;
}

std::vector<PerimeterRow> run_perimeter(PerimeterConfig const& config) {
  std::vector<PerimeterRow> rows;
  for (std::size_t i = 0; i < config.jobs.size(); ++i) {
    auto const& job = config.jobs[i];
    std::string const where = config.jobs.size() > 1 ? "jobs[" + std::to_string(i) + "]" : "";
    MeasureSpec const m = measure_from_json(job.measure, 0, join(where, "measure"));
    Body const body = body_from_json(job.body, m, config.seed, join(where, "body"));
    ShellSide const side = parse_side(job.side, join(where, "side"));

    PerimeterRow row;
    row.body = describe_body(body);
    row.measure = m.describe();
    row.n = m.dim();
    row.samples = config.samples;
    row.seed = config.seed;
    row.eps = config.eps.value_or(default_eps(m));
    row.method = job.method;
    row.side = to_string(resolve_side(side, m));
    if (dimension(body) != m.dim()) throw ConfigError(join(where, "body"), "dimension does not match the measure");

    auto const start = Clock::now();
    try {
      std::string method = job.method;
      if (method == "auto") {
        if (std::holds_alternative<Halfspace>(body) && m.family() == Family::gaussian) method = "closed_form";
        else if (std::holds_alternative<Polytope>(body) || std::holds_alternative<Box>(body)) method = "facet_shell";
        else method = "generic_shell";
      }
      row.method = method;
      PerimeterEstimate e;
      if (method == "closed_form") {
        auto const* h = std::get_if<Halfspace>(&body);
        if (!h) throw UnsupportedError("closed_form is available for halfspaces only");
        e = halfspace_perimeter_exact(*h, m);
        row.side = "exact";
        row.eps = 0.0;
        row.samples = 0;
      } else if (method == "facet_shell") {
        Polytope const p = [&] {
          if (auto const* b = std::get_if<Box>(&body)) return box_as_polytope(*b);
          if (auto const* h = std::get_if<Halfspace>(&body)) return Polytope({*h});
          if (auto const* q = std::get_if<Polytope>(&body)) return *q;
          throw UnsupportedError("facet_shell needs a polytope, box or halfspace");
        }();
        e = facet_shell_perimeter(p, m, config.samples, row.eps, config.seed, side);
      } else {
        auto const named = as_named(body);
        if (!named) throw UnsupportedError("generic_shell needs a ball, box or halfspace");
        e = generic_shell_perimeter(*named, m, config.samples, row.eps, config.seed, side);
      }
      row.value = e.value;
      row.std_error = e.std_error;
    } catch (InputError const& e) {
      throw ConfigError(where.empty() ? "body" : where, e.what());
    } catch (std::exception const& e) {
      row.value = std::numeric_limits<double>::quiet_NaN();
      row.std_error = std::numeric_limits<double>::quiet_NaN();
      row.error = e.what();
    }
    row.wall_time = seconds_since(start);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_perimeter_csv(std::ostream& os, std::vector<PerimeterRow> const& rows) {
  os << "body,measure,n,method,side,value,stderr,eps,samples,seed,version,error,wall_time\n";
  for (auto const& r : rows) {
    os << csv_field(r.body) << ',' << csv_field(r.measure) << ',' << r.n << ',' << r.method << ',' << r.side << ','
       << num(r.value) << ',' << num(r.std_error) << ',' << num(r.eps) << ',' << r.samples << ',' << r.seed << ','
       << csv_field(version_string()) << ',' << csv_field(r.error) << ',' << num(r.wall_time) << '\n';
  }
}

// ---- nazarov-scan ------------------------------------------------------

ScanConfig scan_config_from_json(json const& j) {
  require_object(j, "");
  ScanConfig config;
  json const* dims = find(j, "dims");
  if (!dims || !dims->is_array() || dims->empty()) throw ConfigError("dims", "expected a nonempty array of integers");
  for (std::size_t i = 0; i < dims->size(); ++i) {
    auto const& d = (*dims)[i];
    if (!d.is_number_integer() || d.get<int>() < 1)
      throw ConfigError("dims[" + std::to_string(i) + "]", "expected a positive integer");
    config.dims.push_back(d.get<int>());
  }
  json const* measure = find(j, "measure");
  config.measure = measure ? *measure : json{{"family", "gaussian"}};
  if (config.measure.is_string()) config.measure = json{{"family", config.measure}};
  measure_from_json(config.measure, config.dims.front(), "measure");  // validate early
  config.trials = static_cast<std::size_t>(get_unsigned_or(j, "trials", "", config.trials));
  if (config.trials < 1) throw ConfigError("trials", "must be at least 1");
  config.samples = get_samples(j, config.samples);
  config.seed = get_unsigned_or(j, "seed", "", config.seed);
  config.alpha = get_optional_number(j, "alpha", "");
  if (config.alpha && !(*config.alpha > 0.0 && *config.alpha < 1.0)) throw ConfigError("alpha", "must lie in (0, 1)");
  config.beta = get_optional_number(j, "beta", "");
  if (config.beta && !(*config.beta > 1.0)) throw ConfigError("beta", "must exceed 1");
  config.eps = get_optional_number(j, "eps", "");
  if (config.eps && !(*config.eps > 0.0)) throw ConfigError("eps", "must be positive");
  config.stats_budget = static_cast<std::size_t>(get_unsigned_or(j, "stats_budget", "", config.stats_budget));
  if (config.stats_budget < 1000) throw ConfigError("stats_budget", "must be at least 1000");
  config.max_minutes = get_number_or(j, "max_minutes", "", config.max_minutes);
  if (!(config.max_minutes > 0.0)) throw ConfigError("max_minutes", "must be positive");
  return config;
}

namespace {

NazarovParams scan_params(ScanConfig const& config, RadialStats const& stats) {
  double const alpha = config.alpha.value_or(stats.norm_sd() / stats.mean_norm);
  return make_params(stats, alpha, config.beta);
}

}  // namespace

double estimate_scan_minutes(ScanConfig const& config) {
  constexpr std::size_t kCalibrationSamples = 10'000;
  int const n0 = *std::min_element(config.dims.begin(), config.dims.end());
  MeasureSpec const m0 = measure_from_json(config.measure, n0);
  double unit = 0.0;
  try {
    RadialStats const stats = trial_stats(m0, config.seed, config.stats_budget);
    NazarovParams const params = scan_params(config, stats);
    Polytope const q = build_polytope(params, n0, config.seed);
    auto const start = Clock::now();
    facet_shell_perimeter(q, m0, kCalibrationSamples, config.eps.value_or(default_eps(m0)), config.seed);
    double const elapsed = seconds_since(start);
    unit = elapsed / (static_cast<double>(kCalibrationSamples) * n0 * static_cast<double>(params.facets + 1));
  } catch (NumericalError const&) {
    return 0.0;
  } catch (PreconditionError const&) {
    return 0.0;
  }
  double total = 0.0;
  for (int n : config.dims) {
    try {
      MeasureSpec const m = measure_from_json(config.measure, n);
      RadialStats const stats = trial_stats(m, config.seed, config.stats_budget);
      NazarovParams const params = scan_params(config, stats);
      total += unit * static_cast<double>(config.trials) * static_cast<double>(config.samples) * n *
               static_cast<double>(params.facets + 1);
    } catch (NumericalError const&) {
    } catch (PreconditionError const&) {
    }
  }
  return total / 60.0;
}

std::vector<ScanRow> run_nazarov_scan(ScanConfig const& config) {
  std::vector<ScanRow> rows;
  rows.reserve(config.dims.size());
  double const nan = std::numeric_limits<double>::quiet_NaN();
  for (int n : config.dims) {
    ScanRow row;
    row.n = n;
    row.seed = config.seed;
    row.expected_norm = row.norm_sd = row.alpha = row.beta = row.rho = nan;
    row.analytic_bound = row.empirical_mean = row.empirical_stderr = nan;
    MeasureSpec const m = measure_from_json(config.measure, n);
    auto const start = Clock::now();
    try {
      RadialStats const stats = trial_stats(m, config.seed, config.stats_budget);
      row.expected_norm = stats.mean_norm;
      row.norm_sd = stats.norm_sd();
      row.alpha = config.alpha.value_or(stats.norm_sd() / stats.mean_norm);
      NazarovOptions options;
      options.beta = config.beta;
      options.eps = config.eps.value_or(0.0);
      options.stats_budget = config.stats_budget;
      NazarovRun const run = run_nazarov_trials(m, row.alpha, config.trials, config.samples, config.seed, options);
      row.beta = run.params.beta;
      row.rho = run.params.rho;
      row.facets = run.params.facets;
      row.analytic_bound = analytic_lower_bound(run.stats, row.alpha, n);
      row.empirical_mean = run.estimate.value;
      row.empirical_stderr = run.estimate.std_error;
    } catch (InputError const& e) {
      row.error = e.what();
    } catch (PreconditionError const& e) {
      row.error = e.what();
    } catch (NumericalError const& e) {
      row.error = e.what();
    } catch (EmptyBodyError const& e) {
      row.error = e.what();
    }
    row.wall_time = seconds_since(start);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_scan_csv(std::ostream& os, std::vector<ScanRow> const& rows) {
  os << "n,E,W,alpha,beta,rho,N,analytic_bound,empirical_mean,empirical_stderr,seed,version,error,wall_time\n";
  for (auto const& r : rows) {
    os << r.n << ',' << num(r.expected_norm) << ',' << num(r.norm_sd) << ',' << num(r.alpha) << ','
       << num(r.beta) << ',' << num(r.rho) << ',' << r.facets << ',' << num(r.analytic_bound) << ','
       << num(r.empirical_mean) << ',' << num(r.empirical_stderr) << ',' << r.seed << ','
       << csv_field(version_string()) << ',' << csv_field(r.error) << ',' << num(r.wall_time) << '\n';
  }
}

std::vector<std::pair<double, double>> scan_points(std::vector<ScanRow> const& rows) {
  std::vector<std::pair<double, double>> points;
  for (auto const& r : rows)
    if (r.ok() && r.empirical_mean > 0.0) points.emplace_back(r.n, r.empirical_mean);
  return points;
}

void write_scan_svg(std::ostream& os, std::vector<ScanRow> const& rows, std::string const& title) {
  auto const points = scan_points(rows);
  constexpr double kWidth = 640, kHeight = 420, kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
     << title << "</text>\n";
  if (points.empty()) {
    os << "</svg>\n";
    return;
  }
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
  for (auto const& [n, v] : points) {
    xlo = std::min(xlo, std::log(n));
    xhi = std::max(xhi, std::log(n));
    ylo = std::min(ylo, std::log(v));
    yhi = std::max(yhi, std::log(v));
  }
  if (xhi - xlo < 1e-12) xhi = xlo + 1.0;
  if (yhi - ylo < 1e-12) {
    ylo -= 0.5;
    yhi += 0.5;
  }
  double const pad = 0.05 * (yhi - ylo);
  ylo -= pad;
  yhi += pad;
  auto px = [&](double n) { return kLeft + (std::log(n) - xlo) / (xhi - xlo) * (kWidth - kLeft - kRight); };
  auto py = [&](double v) { return kHeight - kBottom - (std::log(v) - ylo) / (yhi - ylo) * (kHeight - kTop - kBottom); };
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << kWidth - kRight << "\" y2=\""
     << kHeight - kBottom << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kHeight - kBottom
     << "\" stroke=\"black\"/>\n";
  os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
  for (auto const& [n, v] : points) os << px(n) << ',' << py(v) << ' ';
  os << "\"/>\n";
  for (auto const& [n, v] : points) {
    os << "<circle cx=\"" << px(n) << "\" cy=\"" << py(v) << "\" r=\"3\" fill=\"steelblue\"/>\n";
    os << "<text x=\"" << px(n) << "\" y=\"" << kHeight - kBottom + 16
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << n << "</text>\n";
    os << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(v) + 4
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << std::setprecision(3) << v
       << "</text>\n";
  }
  os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">n (log scale)</text>\n";
  os << "<text x=\"16\" y=\"" << kHeight / 2 << "\" transform=\"rotate(-90 16 " << kHeight / 2
     << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">perimeter (log scale)</text>\n";
  os << "</svg>\n";
}

std::vector<std::pair<double, double>> read_points_csv(std::istream& is, std::string const& value_column) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("input", "empty CSV");
  auto const header = split_csv_line(line);
  auto column = [&](std::string const& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ConfigError("input", "CSV has no column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  std::size_t const n_col = column("n");
  std::size_t const v_col = column(value_column);
  auto const err = std::find(header.begin(), header.end(), "error");
  std::vector<std::pair<double, double>> points;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto const fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw ConfigError("input:" + std::to_string(line_no), "row has " + std::to_string(fields.size()) +
                                                                " fields, header has " + std::to_string(header.size()));
    if (err != header.end() && !fields[static_cast<std::size_t>(err - header.begin())].empty()) continue;
    try {
      double const v = std::stod(fields[v_col]);
      if (!std::isfinite(v)) continue;
      points.emplace_back(std::stod(fields[n_col]), v);
    } catch (std::exception const&) {
      throw ConfigError("input:" + std::to_string(line_no), "could not parse n or " + value_column);
    }
  }
  return points;
}

void write_fit_csv(std::ostream& os, FitResult const& fit, std::uint64_t seed) {
  os << "slope,intercept,r_squared,points,seed,version\n";
  std::ostringstream pts;
  pts << std::setprecision(17);
  for (std::size_t i = 0; i < fit.points.size(); ++i)
    pts << (i ? ";" : "") << fit.points[i].first << ':' << fit.points[i].second;
  os << num(fit.slope) << ',' << num(fit.intercept) << ',' << num(fit.r_squared) << ',' << csv_field(pts.str()) << ','
     << seed << ',' << csv_field(version_string()) << '\n';
}

// ---- bounds-report -----------------------------------------------------

ReportConfig report_config_from_json(json const& j) {
  require_object(j, "");
  ReportConfig config;
  json const* measure = find(j, "measure");
  if (!measure) throw ConfigError("measure", "missing measure");
  config.measure = *measure;
  if (json const* body = find(j, "body")) config.body = *body;
  auto& o = config.options;
  o.samples = get_samples(j, o.samples);
  o.seed = get_unsigned_or(j, "seed", "", o.seed);
  o.eps = get_number_or(j, "eps", "", 0.0);
  if (o.eps < 0.0) throw ConfigError("eps", "must be positive");
  o.balance_alpha = get_number_or(j, "balance_alpha", "", o.balance_alpha);
  if (!(o.balance_alpha > 0.0 && o.balance_alpha < 1.0)) throw ConfigError("balance_alpha", "must lie in (0, 1)");
  o.isotropic_c0 = get_optional_number(j, "isotropic_c0", "");
  o.john_c0 = get_optional_number(j, "john_c0", "");
  return config;
}

void write_report_csv(std::ostream& os, BoundReport const& report, std::uint64_t seed, double wall_time) {
  os << "measure,body,lower,lower_source,upper,upper_source,empirical,empirical_stderr,seed,version,wall_time\n";
  double const nan = std::numeric_limits<double>::quiet_NaN();
  os << csv_field(report.measure) << ',' << csv_field(report.body) << ',' << num(report.lower) << ','
     << report.lower_source << ',' << num(report.upper) << ',' << report.upper_source << ','
     << num(report.empirical ? report.empirical->value : nan) << ','
     << num(report.empirical ? report.empirical->std_error : nan) << ',' << seed << ','
     << csv_field(version_string()) << ',' << num(wall_time) << '\n';
}

}  // namespace maxperim::experiments
