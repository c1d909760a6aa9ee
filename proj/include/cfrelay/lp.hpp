#pragma once

#include <vector>

namespace cfrelay {

enum class Sense { LessEqual, GreaterEqual, Equal };

struct LinearConstraint {
  std::vector<double> coeffs;
  double bound = 0.0;
  Sense sense = Sense::LessEqual;
};

/// maximize objective . v  subject to the rows; each variable is either
/// nonnegative or free.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<bool> free_variable;  // empty means all nonnegative
  std::vector<LinearConstraint> constraints;

  int variables() const { return static_cast<int>(objective.size()); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double optimum = 0.0;
  std::vector<double> witness;
  double max_residual = 0.0;  // largest constraint or sign violation of the witness
};

/// Two-phase dense simplex with Bland's rule. Phase one declares infeasibility
/// when the artificial mass cannot be driven below `feasibility_tol`.
LpResult solve_lp(const LinearProgram& lp, double feasibility_tol = 1e-9);

}  // namespace cfrelay
