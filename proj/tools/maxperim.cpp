// maxperim: command-line runner for perimeter estimates, random-polytope
// scans, bound reports and exponent fits.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "maxperim/experiments.hpp"

namespace ex = maxperim::experiments;
using ex::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct MeasureFlags {
  std::string family = "gaussian";
  int dim = 0;
  std::optional<double> p;
  std::optional<double> scale;
};

struct BodyFlags {
  std::string kind;
  std::optional<double> radius;
  std::optional<double> halfwidth;
  std::vector<double> halfwidths;
  std::optional<double> offset;
  std::optional<double> alpha;
};

void add_measure_flags(CLI::App* app, MeasureFlags& f, bool with_dim) {
  app->add_option("--measure", f.family, "Measure family: gaussian, pnorm, uniform")
      ->check(CLI::IsMember({"gaussian", "pnorm", "uniform"}));
  if (with_dim) app->add_option("--dim", f.dim, "Dimension n")->check(CLI::PositiveNumber);
  app->add_option("--p", f.p, "Exponent of the pnorm family");
  app->add_option("--scale", f.scale, "Scale of the measure");
}

void add_body_flags(CLI::App* app, BodyFlags& f, std::string const& default_kind) {
  f.kind = default_kind;
  app->add_option("--body", f.kind, "Body: ball, cube, box, halfspace, nazarov" +
                                        std::string(default_kind == "none" ? ", none" : ""));
  app->add_option("--radius", f.radius, "Ball radius");
  app->add_option("--halfwidth", f.halfwidth, "Cube half-width (default 0.5, unit volume)");
  app->add_option("--halfwidths", f.halfwidths, "Box half-widths")->delimiter(',');
  app->add_option("--offset", f.offset, "Halfspace offset for normal e_1");
  app->add_option("--alpha", f.alpha, "Random-polytope alpha");
}

json measure_json(MeasureFlags const& f) {
  json m{{"family", f.family}};
  if (f.dim > 0) m["dim"] = f.dim;
  if (f.p) m["p"] = *f.p;
  if (f.scale) m["scale"] = *f.scale;
  return m;
}

std::optional<json> body_json(BodyFlags const& f, int dim) {
  if (f.kind == "none") return std::nullopt;
  json b{{"kind", f.kind}};
  if (f.radius) b["radius"] = *f.radius;
  if (f.halfwidth) b["halfwidth"] = *f.halfwidth;
  if (!f.halfwidths.empty()) b["halfwidths"] = f.halfwidths;
  if (f.alpha) b["alpha"] = *f.alpha;
  if (f.kind == "halfspace") {
    std::vector<double> normal(static_cast<std::size_t>(std::max(dim, 1)), 0.0);
    normal[0] = 1.0;
    b["normal"] = normal;
    b["offset"] = f.offset.value_or(0.0);
  }
  return b;
}

// Top-level keys of the config file replace those built from flags.
json overlay_config(json flags, std::string const& path) {
  if (path.empty()) return flags;
  std::ifstream in(path);
  if (!in) throw ex::ConfigError("--config", "cannot open '" + path + "'");
  json file;
  try {
    file = json::parse(in);
  } catch (json::parse_error const& e) {
    throw ex::ConfigError(path, e.what());
  }
  if (!file.is_object()) throw ex::ConfigError(path, "top level must be a JSON object");
  for (auto it = file.begin(); it != file.end(); ++it) flags[it.key()] = it.value();
  return flags;
}

// Writes to the named file, or to stdout for "" / "-".
class Output {
 public:
  explicit Output(std::string const& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw ex::ConfigError("--output", "cannot write '" + path + "'");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void guard_runtime(ex::ScanConfig const& config) {
  double const minutes = ex::estimate_scan_minutes(config);
  std::cerr << "projected runtime: " << minutes << " min (limit " << config.max_minutes << ")\n";
  if (minutes > config.max_minutes)
    throw ex::ConfigError("max_minutes", "projected runtime " + std::to_string(minutes) +
                                             " min exceeds the limit; reduce dims, trials or samples");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximal perimeter of convex sets under probability measures"};
  app.require_subcommand(1);
  std::string config_path;
  std::string output_path;
  std::uint64_t seed = 0;
  std::size_t samples = 200'000;
  std::optional<double> eps;
  app.add_option("--config", config_path, "JSON config; its keys override flags");

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config; its keys override flags");
    sub->add_option("--output,-o", output_path, "CSV output path (default stdout)");
    sub->add_option("--seed", seed, "Random seed");
    sub->add_option("--samples", samples, "Monte Carlo samples per estimate");
    sub->add_option("--eps", eps, "Shell width (default 5% of the length scale)");
  };

  // perimeter
  auto* perimeter = app.add_subcommand("perimeter", "Estimate the perimeter of one body under one measure");
  common(perimeter);
  MeasureFlags perimeter_measure;
  BodyFlags perimeter_body;
  std::string method = "auto";
  std::string side = "auto";
  add_measure_flags(perimeter, perimeter_measure, true);
  add_body_flags(perimeter, perimeter_body, "cube");
  perimeter->add_option("--method", method, "auto, facet_shell, generic_shell, closed_form");
  perimeter->add_option("--side", side, "Shell side: auto, outer, inner");

  // nazarov-scan and scaling-fit share the scan flags
  std::vector<int> dims;
  MeasureFlags scan_measure;
  std::size_t trials = 8;
  std::optional<double> alpha, beta;
  double max_minutes = 30.0;
  std::string svg_path;
  auto scan_flags = [&](CLI::App* sub) {
    common(sub);
    sub->add_option("--dims", dims, "Comma-separated dimensions")->delimiter(',');
    add_measure_flags(sub, scan_measure, false);
    sub->add_option("--trials", trials, "Random polytopes per dimension");
    sub->add_option("--alpha", alpha, "Concentration parameter (default sqrt(Var|X|)/E|X|)");
    sub->add_option("--beta", beta, "Shell parameter (default optimized)");
    sub->add_option("--max-minutes", max_minutes, "Refuse scans projected to run longer");
    sub->add_option("--svg", svg_path, "Write an SVG chart of the scan");
  };
  auto* scan = app.add_subcommand("nazarov-scan", "Random-polytope perimeters over a range of dimensions");
  scan_flags(scan);

  auto* fit = app.add_subcommand("scaling-fit", "Fit log value against log n, from a CSV or a fresh scan");
  scan_flags(fit);
  std::string input_path;
  std::string column = "empirical_mean";
  fit->add_option("--input", input_path, "CSV with columns n and --column");
  fit->add_option("--column", column, "Value column to fit");

  // bounds-report
  auto* report = app.add_subcommand("bounds-report", "Lower and upper bounds with an empirical estimate");
  common(report);
  MeasureFlags report_measure;
  BodyFlags report_body;
  std::string json_path;
  double balance_alpha = 0.1;
  add_measure_flags(report, report_measure, true);
  add_body_flags(report, report_body, "none");
  report->add_option("--json", json_path, "JSON output path (default stdout)");
  report->add_option("--balance-alpha", balance_alpha, "Tolerance of the balanced level");

  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const& e) {
    return app.exit(e);
  } catch (CLI::CallForAllHelp const& e) {
    return app.exit(e);
  } catch (CLI::ParseError const& e) {
    app.exit(e);
    return kExitConfig;
  }

  auto scalar_flags = [&](CLI::App* sub) {
    json j;
    if (sub->count("--seed")) j["seed"] = seed;
    if (sub->count("--samples")) j["samples"] = samples;
    if (eps) j["eps"] = *eps;
    return j;
  };
  auto scan_json = [&](CLI::App* sub) {
    json j = scalar_flags(sub);
    if (!dims.empty()) j["dims"] = dims;
    j["measure"] = measure_json(scan_measure);
    if (sub->count("--trials")) j["trials"] = trials;
    if (alpha) j["alpha"] = *alpha;
    if (beta) j["beta"] = *beta;
    j["max_minutes"] = max_minutes;
    return overlay_config(j, config_path);
  };

  try {
    if (perimeter->parsed()) {
      json j = scalar_flags(perimeter);
      j["measure"] = measure_json(perimeter_measure);
      if (auto b = body_json(perimeter_body, perimeter_measure.dim)) j["body"] = *b;
      j["method"] = method;
      j["side"] = side;
      auto const config = ex::perimeter_config_from_json(overlay_config(j, config_path));
      auto const rows = ex::run_perimeter(config);
      Output out(output_path);
      ex::write_perimeter_csv(out.stream(), rows);
      bool any_ok = false;
      for (auto const& r : rows) {
        if (r.error.empty()) any_ok = true;
        else std::cerr << "row failed: " << r.error << '\n';
      }
      return any_ok ? kExitOk : kExitNumerical;
    }

    if (scan->parsed() || (fit->parsed() && input_path.empty())) {
      CLI::App* sub = scan->parsed() ? scan : fit;
      json const j = scan_json(sub);
      auto const config = ex::scan_config_from_json(j);
      std::uint64_t const config_seed = config.seed;
      guard_runtime(config);
      auto const rows = ex::run_nazarov_scan(config);
      bool any_ok = false;
      for (auto const& r : rows) {
        if (r.ok()) any_ok = true;
        else std::cerr << "n=" << r.n << " failed: " << r.error << '\n';
      }
      if (!svg_path.empty()) {
        std::ofstream svg(svg_path);
        if (!svg) throw ex::ConfigError("--svg", "cannot write '" + svg_path + "'");
        ex::write_scan_svg(svg, rows, "random polytope perimeter, " + j["measure"].value("family", std::string("?")));
      }
      if (scan->parsed()) {
        Output out(output_path);
        ex::write_scan_csv(out.stream(), rows);
        return any_ok ? kExitOk : kExitNumerical;
      }
      if (!any_ok) return kExitNumerical;
      auto const points = ex::scan_points(rows);
      if (points.size() < 3) {
        std::cerr << "scaling-fit: fewer than 3 successful rows\n";
        return kExitNumerical;
      }
      Output out(output_path);
      ex::write_fit_csv(out.stream(), ex::fit_exponent(points), config_seed);
      return kExitOk;
    }

    if (fit->parsed()) {
      std::ifstream in(input_path);
      if (!in) throw ex::ConfigError("--input", "cannot open '" + input_path + "'");
      auto const points = ex::read_points_csv(in, column);
      if (points.size() < 3) throw ex::ConfigError("--input", "need at least 3 usable rows");
      Output out(output_path);
      ex::write_fit_csv(out.stream(), ex::fit_exponent(points), seed);
      return kExitOk;
    }

    if (report->parsed()) {
      json j = scalar_flags(report);
      j["measure"] = measure_json(report_measure);
      if (auto b = body_json(report_body, report_measure.dim)) j["body"] = *b;
      j["balance_alpha"] = balance_alpha;
      auto const config = ex::report_config_from_json(overlay_config(j, config_path));
      auto const m = ex::measure_from_json(config.measure);
      std::optional<maxperim::Body> body;
      if (config.body) body = ex::body_from_json(*config.body, m, config.options.seed);
      auto const start = std::chrono::steady_clock::now();
      auto const result = maxperim::bounds_report(m, body, config.options);
      double const wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      std::string const dumped = ex::to_json(result).dump(2);
      if (json_path.empty()) {
        std::cout << dumped << '\n';
      } else {
        std::ofstream js(json_path);
        if (!js) throw ex::ConfigError("--json", "cannot write '" + json_path + "'");
        js << dumped << '\n';
      }
      Output out(output_path);
      ex::write_report_csv(out.stream(), result, config.options.seed, wall);
      return kExitOk;
    }
  } catch (maxperim::InputError const& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (maxperim::UnsupportedError const& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (std::exception const& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}
