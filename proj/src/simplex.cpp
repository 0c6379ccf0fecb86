#include "maxperim/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "maxperim/errors.hpp"

namespace maxperim::lp {

namespace {

constexpr double kPivotTol = 1e-11;

class Tableau {
 public:
  Tableau(std::vector<double> const& a, std::vector<double> const& b, std::vector<double> const& c)
      : rows_(b.size()), vars_(c.size()), width_(vars_ + rows_ + 1),
        cells_((rows_ + 1) * width_, 0.0), basis_(rows_) {
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < vars_; ++j) at(i, j) = a[i * vars_ + j];
      at(i, vars_ + i) = 1.0;
      at(i, width_ - 1) = b[i];
      basis_[i] = vars_ + i;
    }
    // Objective row holds reduced costs -c; the value accumulates in the rhs.
    for (std::size_t j = 0; j < vars_; ++j) at(rows_, j) = -c[j];
  }

  double& at(std::size_t i, std::size_t j) { return cells_[i * width_ + j]; }
  double at(std::size_t i, std::size_t j) const { return cells_[i * width_ + j]; }

  std::size_t rows() const { return rows_; }
  std::size_t columns() const { return width_ - 1; }

  // Most negative reduced cost (Dantzig) or first negative (Bland).
  std::size_t entering(bool bland) const {
    std::size_t best = columns();
    double best_value = -kPivotTol;
    for (std::size_t j = 0; j < columns(); ++j) {
      double const v = at(rows_, j);
      if (v < best_value) {
        best = j;
        best_value = v;
        if (bland) break;
      }
    }
    return best;
  }

  // Ratio test; ties broken by smallest basis index (Bland).
  std::size_t leaving(std::size_t col) const {
    std::size_t best = rows_;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rows_; ++i) {
      double const coef = at(i, col);
      if (coef <= kPivotTol) continue;
      double const ratio = at(i, width_ - 1) / coef;
      if (ratio < best_ratio - 1e-14 ||
          (ratio <= best_ratio + 1e-14 && best < rows_ && basis_[i] < basis_[best])) {
        best = i;
        best_ratio = ratio;
      }
    }
    return best;
  }

  void pivot(std::size_t row, std::size_t col) {
    double const p = at(row, col);
    for (std::size_t j = 0; j < width_; ++j) at(row, j) /= p;
    for (std::size_t i = 0; i <= rows_; ++i) {
      if (i == row) continue;
      double const factor = at(i, col);
      if (factor == 0.0) continue;
      double* target = &cells_[i * width_];
      double const* source = &cells_[row * width_];
      for (std::size_t j = 0; j < width_; ++j) target[j] -= factor * source[j];
    }
    basis_[row] = col;
  }

  double objective() const { return at(rows_, width_ - 1); }

  std::vector<double> solution() const {
    std::vector<double> z(vars_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i)
      if (basis_[i] < vars_) z[basis_[i]] = std::max(0.0, at(i, width_ - 1));
    return z;
  }

 private:
  std::size_t rows_;
  std::size_t vars_;
  std::size_t width_;
  std::vector<double> cells_;
  std::vector<std::size_t> basis_;
};

}  // namespace

Result maximize(std::vector<double> const& a, std::vector<double> const& b,
                std::vector<double> const& c, std::size_t max_iterations) {
  if (a.size() != b.size() * c.size()) throw InputError("lp::maximize: matrix shape mismatch");
  for (double v : b)
    if (v < 0.0) throw InputError("lp::maximize: right-hand side must be nonnegative");

  Tableau tableau(a, b, c);
  if (max_iterations == 0) max_iterations = 50 * (b.size() + c.size()) + 1000;

  // Dantzig pivoting, falling back to Bland's rule after a run of
  // degenerate pivots so that cycling cannot occur.
  std::size_t degenerate_streak = 0;
  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    bool const bland = degenerate_streak > 50;
    std::size_t const col = tableau.entering(bland);
    if (col == tableau.columns()) {
      return {Status::optimal, tableau.objective(), tableau.solution()};
    }
    std::size_t const row = tableau.leaving(col);
    if (row == tableau.rows()) {
      return {Status::unbounded, std::numeric_limits<double>::infinity(), tableau.solution()};
    }
    double const before = tableau.objective();
    tableau.pivot(row, col);
    degenerate_streak = tableau.objective() > before + 1e-15 ? 0 : degenerate_streak + 1;
  }
  return {Status::iteration_limit, tableau.objective(), tableau.solution()};
}

}  // namespace maxperim::lp
