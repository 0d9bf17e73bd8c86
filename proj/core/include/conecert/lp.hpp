#pragma once

#include "conecert/matrix.hpp"

namespace conecert {

// Dense standard-form problem: minimize objective.x subject to
// constraints * x <= rhs and x >= lower_bounds (entries may be -inf).
struct LinearProgram {
  Vector objective;
  Matrix constraints;
  Vector rhs;
  Vector lower_bounds;

  int variable_count() const { return static_cast<int>(objective.size()); }
  int row_count() const { return static_cast<int>(rhs.size()); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Vector x;               // optimal point when Optimal
  double objective = 0.0; // objective value at x when Optimal
  Vector ray;             // improving direction when Unbounded
};

// Two-phase dense simplex with Bland's anti-cycling rule. Throws InputError
// on inconsistent shapes or non-finite data, NumericalError past the pivot
// budget.
LpSolution solve_lp(const LinearProgram& p);

}  // namespace conecert
