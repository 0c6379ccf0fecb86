#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "maxperim/bodies.hpp"
#include "maxperim/errors.hpp"
#include "maxperim/measures.hpp"
#include "maxperim/nazarov.hpp"
#include "maxperim/perimeter.hpp"
#include "maxperim/upper_bounds.hpp"

namespace maxperim::experiments {

using json = nlohmann::json;

// Invalid configuration; `field` is the dotted path of the offending entry.
struct ConfigError : InputError {
  ConfigError(std::string field, std::string const& message);
  std::string field;
};

// Build version, "0.1.0+<git describe>" when built from a checkout.
std::string version_string();

// {"family": "gaussian"|"pnorm"|"uniform", "dim", "p", "body", "shift", "scale"}.
// `dim` may be omitted when `dim_override` is positive.
MeasureSpec measure_from_json(json const& j, int dim_override = 0, std::string const& where = "measure");

// {"kind": "ball"|"cube"|"box"|"halfspace"|"polytope"|"nazarov", ...}. A
// "nazarov" body is drawn from the random-polytope construction for `m`.
Body body_from_json(json const& j, MeasureSpec const& m, std::uint64_t seed, std::string const& where = "body");

json to_json(PerimeterEstimate const& e);
json to_json(BoundReport const& report);

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<std::pair<double, double>> points;  // (log n, log value)
};

// Least-squares fit of log value against log n; needs >= 3 rows with value > 0.
FitResult fit_exponent(std::vector<std::pair<double, double>> const& rows);

// ---- perimeter ---------------------------------------------------------

struct PerimeterJob {
  json measure;
  json body;
  std::string method = "auto";  // auto | facet_shell | generic_shell | closed_form
  std::string side = "auto";    // auto | outer | inner
};

struct PerimeterConfig {
  std::vector<PerimeterJob> jobs;
  std::size_t samples = 200'000;
  std::uint64_t seed = 0;
  std::optional<double> eps;
};

// {"jobs": [{"measure", "body", "method", "side"}], "samples", "seed", "eps"}
// or a single job given by top-level "measure" and "body".
PerimeterConfig perimeter_config_from_json(json const& j);

struct PerimeterRow {
  std::string body;
  std::string measure;
  int n = 0;
  std::string method;
  std::string side;
  double value = 0.0;
  double std_error = 0.0;
  double eps = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::string error;
  double wall_time = 0.0;
};

std::vector<PerimeterRow> run_perimeter(PerimeterConfig const& config);
void write_perimeter_csv(std::ostream& os, std::vector<PerimeterRow> const& rows);

// ---- nazarov-scan ------------------------------------------------------

struct ScanConfig {
  std::vector<int> dims;
  json measure;                 // family and parameters; dim comes from `dims`
  std::size_t trials = 8;
  std::size_t samples = 200'000;
  std::uint64_t seed = 0;
  std::optional<double> alpha;  // default: sqrt(Var|X|) / E|X|
  std::optional<double> beta;   // default: optimized
  std::optional<double> eps;
  std::size_t stats_budget = 200'000;
  double max_minutes = 30.0;
};

ScanConfig scan_config_from_json(json const& j);

struct ScanRow {
  int n = 0;
  double expected_norm = 0.0;
  double norm_sd = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double rho = 0.0;
  std::uint64_t facets = 0;
  double analytic_bound = 0.0;
  double empirical_mean = 0.0;
  double empirical_stderr = 0.0;
  std::uint64_t seed = 0;
  std::string error;
  double wall_time = 0.0;

  bool ok() const { return error.empty(); }
};

// Projected wall-clock minutes, extrapolated from a short calibration run.
double estimate_scan_minutes(ScanConfig const& config);

// One row per dimension, in the order given; numerical failures land in the
// row's error column.
std::vector<ScanRow> run_nazarov_scan(ScanConfig const& config);
void write_scan_csv(std::ostream& os, std::vector<ScanRow> const& rows);
void write_scan_svg(std::ostream& os, std::vector<ScanRow> const& rows, std::string const& title);

// (n, empirical_mean) for every successful row.
std::vector<std::pair<double, double>> scan_points(std::vector<ScanRow> const& rows);

// Reads (n, value) pairs from a CSV with a header naming both columns.
std::vector<std::pair<double, double>> read_points_csv(std::istream& is, std::string const& value_column);

void write_fit_csv(std::ostream& os, FitResult const& fit, std::uint64_t seed);

// ---- bounds-report -----------------------------------------------------

struct ReportConfig {
  json measure;
  std::optional<json> body;
  ReportOptions options;
};

ReportConfig report_config_from_json(json const& j);

void write_report_csv(std::ostream& os, BoundReport const& report, std::uint64_t seed, double wall_time);

}  // namespace maxperim::experiments
