#pragma once

#include "npsl/linalg.hpp"

namespace npsl {

/// maximize objectiveᵀx  s.t.  a_ub x <= b_ub,  a_eq x = b_eq,  x >= 0.
/// Empty a_ub / a_eq (zero rows) are allowed.
struct LinearProgram {
  Vector objective;
  Matrix a_ub;
  Vector b_ub;
  Matrix a_eq;
  Vector b_eq;
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Vector x;
  double value = 0.0;
  int pivots = 0;
};

struct LpOptions {
  double pivot_tol = 1e-12;
  double cost_tol = 1e-10;
  double feasibility_tol = 1e-9;
  int max_pivots = 100000;
};

/// Dense two-phase tableau simplex with Bland's anti-cycling rule.
LpSolution solve_lp(const LinearProgram& lp, const LpOptions& opts = {});

const char* to_string(LpStatus s);

}  // namespace npsl
