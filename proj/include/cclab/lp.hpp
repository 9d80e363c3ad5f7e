#pragma once

#include "cclab/core.hpp"

#include <string>

namespace cclab {

// min c.x subject to A x = b, x >= 0; dense two-phase simplex with Bland's rule.
struct LpResult {
  enum Status { Optimal, Infeasible, Unbounded } status = Infeasible;
  VecX x;
  double objective = 0;
  int pivots = 0;
};
LpResult solve_lp(const MatX& A, const VecX& b, const VecX& c, double eps = 1e-11);

const char* to_string(LpResult::Status s);

}  // namespace cclab
