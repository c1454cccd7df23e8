#include "linmvn/feasibility.hpp"

#include "linmvn/error.hpp"

#include <algorithm>
#include <string>

namespace linmvn {

namespace {

struct NormalizedRows {
  Matrix h;
  Vector k;
  Vector unit;  // 1 for rows with nonzero norm, 0 otherwise
};

NormalizedRows normalize(const Matrix& h, const Vector& k) {
  NormalizedRows out{h, k, Vector::Zero(h.rows())};
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    const double norm = h.row(i).norm();
    if (norm > 0.0) {
      out.h.row(i) /= norm;
      out.k[i] /= norm;
      out.unit[i] = 1.0;
    }
  }
  return out;
}

LinearProgram region_program(const NormalizedRows& rows, Vector objective) {
  const Eigen::Index n = rows.h.cols();
  LinearProgram lp;
  lp.objective = std::move(objective);
  lp.rows = rows.h;
  lp.rhs = -rows.k;
  lp.senses.assign(rows.h.rows(), RowSense::GreaterEqual);
  lp.free.assign(n, true);
  return lp;
}

}  // namespace

LinearProgram phase_one_program(const Matrix& h, const Vector& k) {
  const NormalizedRows rows = normalize(h, k);
  const Eigen::Index m = h.rows();
  const Eigen::Index n = h.cols();
  LinearProgram lp;
  lp.objective = Vector::Zero(n + m);
  lp.objective.tail(m).setOnes();
  lp.rows.resize(m, n + m);
  lp.rows << rows.h, Matrix::Identity(m, m);
  lp.rhs = -rows.k;
  lp.senses.assign(m, RowSense::GreaterEqual);
  lp.free.assign(n + m, false);
  std::fill(lp.free.begin(), lp.free.begin() + n, true);
  return lp;
}

LinearProgram max_slack_program(const Matrix& h, const Vector& k) {
  const NormalizedRows rows = normalize(h, k);
  const Eigen::Index m = h.rows();
  const Eigen::Index n = h.cols();
  LinearProgram lp;
  lp.objective = Vector::Zero(n + 1);
  lp.objective[n] = -1.0;
  lp.rows = Matrix::Zero(m + 1, n + 1);
  lp.rows.topLeftCorner(m, n) = rows.h;
  lp.rows.col(n).head(m) = -rows.unit;
  lp.rows(m, n) = 1.0;
  lp.rhs.resize(m + 1);
  lp.rhs << -rows.k, 1.0;
  lp.senses.assign(m, RowSense::GreaterEqual);
  lp.senses.push_back(RowSense::LessEqual);
  lp.free.assign(n + 1, true);
  return lp;
}

LinearProgram nearest_point_program(const Matrix& h, const Vector& k) {
  const NormalizedRows rows = normalize(h, k);
  const Eigen::Index m = h.rows();
  const Eigen::Index n = h.cols();
  LinearProgram lp;
  lp.objective = Vector::Zero(n + 1);
  lp.objective[n] = 1.0;
  lp.rows = Matrix::Zero(m + 2 * n, n + 1);
  lp.rows.topLeftCorner(m, n) = rows.h;
  lp.rows.block(m, 0, n, n) = -Matrix::Identity(n, n);
  lp.rows.block(m + n, 0, n, n) = Matrix::Identity(n, n);
  lp.rows.col(n).tail(2 * n).setOnes();
  lp.rhs = Vector::Zero(m + 2 * n);
  lp.rhs.head(m) = -rows.k;
  lp.senses.assign(m + 2 * n, RowSense::GreaterEqual);
  lp.free.assign(n + 1, true);
  return lp;
}

LinearProgram boxed_max_slack_program(const Matrix& h, const Vector& k, double half_width) {
  const Eigen::Index n = h.cols();
  LinearProgram lp = max_slack_program(h, k);
  const Eigen::Index base = lp.num_rows();
  lp.rows.conservativeResize(base + 2 * n, Eigen::NoChange);
  lp.rows.bottomRows(2 * n).setZero();
  lp.rows.block(base, 0, n, n) = Matrix::Identity(n, n);
  lp.rows.block(base + n, 0, n, n) = -Matrix::Identity(n, n);
  lp.rhs.conservativeResize(base + 2 * n);
  lp.rhs.tail(2 * n).setConstant(half_width);
  lp.senses.resize(base + 2 * n, RowSense::LessEqual);
  return lp;
}

FeasibilityResult find_feasible_point(const Matrix& h, const Vector& k,
                                      const FeasibilityOptions& options) {
  const Eigen::Index m = h.rows();
  const Eigen::Index n = h.cols();
  if (m < 1) throw Error(ErrorCode::InvalidProblem, "feasibility needs at least one inequality");
  if (k.size() != m) throw Error(ErrorCode::InvalidProblem, "H and k have mismatched sizes");

  const LpSolution phase_one = solve_lp(phase_one_program(h, k), options.simplex);
  if (phase_one.status != LpStatus::Optimal) {
    throw Error(ErrorCode::InvalidProblem, "phase-1 program did not reach an optimum");
  }
  if (phase_one.objective > options.violation_tol) {
    return Infeasible{phase_one.objective};
  }

  const LpSolution slack = solve_lp(max_slack_program(h, k), options.simplex);
  if (slack.status == LpStatus::Optimal && slack.x[n] > options.radius_tol) {
    FullDimensional full{slack.x.head(n), slack.x[n], slack.x[n]};
    const LpSolution nearest = solve_lp(nearest_point_program(h, k), options.simplex);
    if (nearest.status == LpStatus::Optimal) {
      const LpSolution local =
          solve_lp(boxed_max_slack_program(h, k, nearest.x[n] + 1.0), options.simplex);
      if (local.status == LpStatus::Optimal && local.x[n] > options.radius_tol) {
        full.start = local.x.head(n);
        full.start_slack = local.x[n];
      }
    }
    return full;
  }

  // Zero Chebyshev radius: the set is either a single point or a
  // lower-dimensional face. Probe every coordinate extent.
  const NormalizedRows rows = normalize(h, k);
  Vector lower(n), upper(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (const double direction : {1.0, -1.0}) {
      Vector objective = Vector::Zero(n);
      objective[j] = direction;
      const LpSolution range = solve_lp(region_program(rows, objective), options.simplex);
      if (range.status == LpStatus::Unbounded) {
        throw Error(ErrorCode::DegenerateRegion,
                    "feasible set is lower-dimensional and unbounded along coordinate " +
                        std::to_string(j + 1));
      }
      if (range.status == LpStatus::Infeasible) return Infeasible{phase_one.objective};
      (direction > 0.0 ? lower : upper)[j] = range.x[j];
    }
    if (upper[j] - lower[j] > options.range_tol) {
      throw Error(ErrorCode::DegenerateRegion,
                  "feasible set is lower-dimensional with extent " +
                      std::to_string(upper[j] - lower[j]) + " along coordinate " +
                      std::to_string(j + 1));
    }
  }
  return PointMass{0.5 * (lower + upper)};
}

}  // namespace linmvn
