#pragma once

#include "linmvn/core.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace linmvn {

/// x ~ N(mean, covariance) subject to A x + b >= 0 and C x + d = 0.
/// Either constraint block may have zero rows.
struct ProblemSpec {
  Vector mean;
  Matrix covariance;
  Matrix ineq_matrix;  // A, m x n
  Vector ineq_offset;  // b, m
  Matrix eq_matrix;    // C, p x n
  Vector eq_offset;    // d, p

  Eigen::Index dimension() const { return mean.size(); }
  Eigen::Index num_inequalities() const { return ineq_matrix.rows(); }
  Eigen::Index num_equalities() const { return eq_matrix.rows(); }

  /// Builds a spec with empty constraint blocks of the right width.
  static ProblemSpec unconstrained(Vector mean, Matrix covariance);
};

/// Checks shapes, finiteness and that the covariance is symmetric PSD.
/// Throws Error(InvalidProblem | NotSymmetric | NotPsd).
void validate(const ProblemSpec& spec);

struct NoSolution {};
struct UniqueSolution {
  Vector x;
};
struct InfiniteSolutions {};
using EqualityClass = std::variant<NoSolution, UniqueSolution, InfiniteSolutions>;

/// Latent reformulation: x = F y + g with y ~ N(0, covariance) and
/// H y + k >= 0. `gain` (E) is absent when there are no equalities.
struct TransformedProblem {
  std::optional<Matrix> gain;
  Matrix projection;  // F
  Vector shift;       // g
  Matrix ineq_matrix; // H
  Vector ineq_offset; // k

  Eigen::Index dimension() const { return projection.rows(); }
  Eigen::Index num_inequalities() const { return ineq_matrix.rows(); }
};

/// Zero, one or infinitely many solutions of C x + d = 0, decided by
/// comparing rank(C), rank([C | -d]) and n with relative singular-value
/// cutoff `tol`.
EqualityClass classify_equality_system(const Matrix& eq_matrix, const Vector& eq_offset,
                                       double tol = 1e-10);

/// Keeps the rows of [C | d] that are linearly independent of the rows kept
/// before them.
std::vector<Eigen::Index> independent_rows(const Matrix& eq_matrix, const Vector& eq_offset,
                                           double tol = 1e-10);

/// E = S C^T (C S C^T)^-1, F = I - E C, g = F mu - E d, H = A F, k = A g + b.
/// With no equalities: F = I, g = mu, H = A, k = A mu + b.
/// Throws Error(SingularEqualityGram) when C S C^T stays singular after
/// dropping dependent rows.
TransformedProblem build_transform(const ProblemSpec& spec);

inline Vector map_latent(const TransformedProblem& t, const Vector& y) {
  return t.projection * y + t.shift;
}

/// Residual tolerance used for equality checks: 1e-8 * (1 + |d|_inf).
double equality_tolerance(const Vector& eq_offset);

}  // namespace linmvn
