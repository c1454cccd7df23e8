#pragma once

#include "linmvn/core.hpp"

#include <vector>

namespace linmvn {

enum class RowSense { LessEqual, GreaterEqual, Equal };

/// minimize objective . x  subject to  rows(i) . x  <sense_i>  rhs(i).
/// Variables flagged free are unrestricted in sign, the rest are >= 0.
struct LinearProgram {
  Vector objective;
  Matrix rows;
  Vector rhs;
  std::vector<RowSense> senses;
  std::vector<bool> free;

  Eigen::Index num_variables() const { return objective.size(); }
  Eigen::Index num_rows() const { return rows.rows(); }
};

enum class LpStatus { Optimal, Unbounded, Infeasible };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  Vector x;
  int iterations = 0;
};

struct SimplexOptions {
  double pivot_tol = 1e-9;
  double cost_tol = 1e-9;
  double feasibility_tol = 1e-9;
  int stall_limit = 100;          // degenerate pivots before switching to Bland's rule
  int iteration_factor = 50;      // cap = factor * (variables + constraints)
};

/// Dense two-phase tableau simplex. Free variables are split into positive
/// and negative parts. Throws Error(CyclingGuardExceeded) when the iteration
/// cap is hit.
LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options = {});

}  // namespace linmvn
