#pragma once

#include <cstddef>
#include <vector>

namespace maxperim::lp {

enum class Status { optimal, unbounded, iteration_limit };

struct Result {
  Status status = Status::optimal;
  double objective = 0.0;
  std::vector<double> solution;
};

// Dense tableau simplex for
//   maximize c^T z  subject to  A z <= b,  z >= 0,
// with b >= 0 so that z = 0 is a feasible starting vertex. `a` is row-major
// with rows = b.size() and cols = c.size().
Result maximize(std::vector<double> const& a, std::vector<double> const& b,
                std::vector<double> const& c, std::size_t max_iterations = 0);

}  // namespace maxperim::lp
