#pragma once

#include "linmvn/core.hpp"
#include "linmvn/simplex.hpp"

#include <variant>

namespace linmvn {

struct Infeasible {
  double violation = 0.0;  // optimal total slack z
};
struct PointMass {
  Vector y;
};
struct FullDimensional {
  Vector start;
  double chebyshev_radius = 0.0;  // largest uniform slack over the whole set, capped at 1
  double start_slack = 0.0;       // uniform slack guaranteed at `start`
};
using FeasibilityResult = std::variant<Infeasible, PointMass, FullDimensional>;

struct FeasibilityOptions {
  double violation_tol = 1e-9;  // z above this means infeasible
  double radius_tol = 1e-9;     // Chebyshev radius above this means full-dimensional
  double range_tol = 1e-8;      // coordinate extents at or below this mean a single point
  SimplexOptions simplex;
};

/// Phase-1 program: minimize sum(a) over free y and a >= 0 subject to
/// H y + k + a >= 0. Rows of H are normalized to unit length first.
LinearProgram phase_one_program(const Matrix& h, const Vector& k);

/// Max-slack program: maximize s subject to H y + k >= s * |h_i|, s <= 1.
LinearProgram max_slack_program(const Matrix& h, const Vector& k);

/// Smallest |y|_inf over the feasible set: minimize t subject to
/// H y + k >= 0 and -t <= y_j <= t.
LinearProgram nearest_point_program(const Matrix& h, const Vector& k);

/// Max-slack program restricted to the box |y|_inf <= half_width.
LinearProgram boxed_max_slack_program(const Matrix& h, const Vector& k, double half_width);

/// Classifies {y : H y + k >= 0} as empty, a single point or full-dimensional.
/// Requires at least one row. Throws Error(DegenerateRegion) for nonempty
/// lower-dimensional sets that are not a single point.
///
/// A full-dimensional set gets a strictly interior start point: the
/// max-slack point inside the box |y|_inf <= rho + 1, where rho is the
/// smallest |y|_inf over the set. In whitened coordinates the start is thus
/// within one standard deviation per axis of the feasible point nearest the
/// mode, instead of an arbitrary far-away vertex of an unbounded set.
FeasibilityResult find_feasible_point(const Matrix& h, const Vector& k,
                                      const FeasibilityOptions& options = {});

}  // namespace linmvn
