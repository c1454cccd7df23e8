#include "linmvn/simplex.hpp"

#include "linmvn/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace linmvn {

namespace {

enum class ColumnKind { Positive, Negative, Slack, Artificial };

class Tableau {
 public:
  Tableau(const LinearProgram& lp, const SimplexOptions& options) : options_(options) {
    const Eigen::Index m = lp.num_rows();
    const Eigen::Index nv = lp.num_variables();

    // Column layout: split structurals, then slack/surplus, then artificials.
    for (Eigen::Index j = 0; j < nv; ++j) {
      var_pos_.push_back(add_column(ColumnKind::Positive));
      var_neg_.push_back(lp.free[j] ? add_column(ColumnKind::Negative) : -1);
    }

    std::vector<double> sign(m, 1.0);
    std::vector<RowSense> sense(lp.senses);
    std::vector<Eigen::Index> slack_col(m, -1), art_col(m, -1);
    for (Eigen::Index i = 0; i < m; ++i) {
      if (lp.rhs[i] < 0.0) {
        sign[i] = -1.0;
        if (sense[i] == RowSense::LessEqual) {
          sense[i] = RowSense::GreaterEqual;
        } else if (sense[i] == RowSense::GreaterEqual) {
          sense[i] = RowSense::LessEqual;
        }
      }
      if (sense[i] != RowSense::Equal) slack_col[i] = add_column(ColumnKind::Slack);
    }
    for (Eigen::Index i = 0; i < m; ++i) {
      if (sense[i] != RowSense::LessEqual) art_col[i] = add_column(ColumnKind::Artificial);
    }

    const Eigen::Index ncols = static_cast<Eigen::Index>(kinds_.size());
    table_ = Matrix::Zero(m + 1, ncols + 1);
    basis_.assign(m, -1);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double scale = std::max(lp.rows.row(i).cwiseAbs().maxCoeff(), std::abs(lp.rhs[i]));
      const double f = sign[i] / (scale > 0.0 ? scale : 1.0);
      for (Eigen::Index j = 0; j < nv; ++j) {
        table_(i, var_pos_[j]) = f * lp.rows(i, j);
        if (var_neg_[j] >= 0) table_(i, var_neg_[j]) = -f * lp.rows(i, j);
      }
      table_(i, ncols) = f * lp.rhs[i];
      if (slack_col[i] >= 0) {
        table_(i, slack_col[i]) = sense[i] == RowSense::LessEqual ? 1.0 : -1.0;
      }
      if (art_col[i] >= 0) {
        table_(i, art_col[i]) = 1.0;
        basis_[i] = art_col[i];
      } else {
        basis_[i] = slack_col[i];
      }
    }
    iteration_cap_ = options.iteration_factor * static_cast<long>(nv + m);
  }

  Eigen::Index rows() const { return table_.rows() - 1; }
  Eigen::Index cols() const { return table_.cols() - 1; }
  int iterations() const { return iterations_; }

  bool has_artificials() const {
    for (auto k : kinds_) {
      if (k == ColumnKind::Artificial) return true;
    }
    return false;
  }

  /// Returns false when the objective is unbounded below.
  bool optimize(const Vector& cost, bool allow_artificial) {
    const Eigen::Index m = rows();
    const Eigen::Index rhs = cols();
    table_.row(m).setZero();
    table_.row(m).head(cols()) = cost.transpose();
    for (Eigen::Index i = 0; i < m; ++i) {
      const double cb = cost[basis_[i]];
      if (cb != 0.0) table_.row(m) -= cb * table_.row(i);
    }

    bool bland = false;
    int stalled = 0;
    for (;;) {
      Eigen::Index enter = -1;
      double best = -options_.cost_tol;
      for (Eigen::Index j = 0; j < rhs; ++j) {
        if (!allow_artificial && kinds_[j] == ColumnKind::Artificial) continue;
        const double rc = table_(m, j);
        if (rc < best) {
          enter = j;
          if (bland) break;
          best = rc;
        }
      }
      if (enter < 0) return true;

      Eigen::Index leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m; ++i) {
        const double a = table_(i, enter);
        if (a <= options_.pivot_tol) continue;
        const double r = std::max(table_(i, rhs), 0.0) / a;
        if (r < ratio - 1e-12 || (std::abs(r - ratio) <= 1e-12 && leave >= 0 &&
                                  basis_[i] < basis_[leave])) {
          ratio = r;
          leave = i;
        }
      }
      if (leave < 0) return false;

      if (ratio <= options_.feasibility_tol) {
        if (++stalled > options_.stall_limit) bland = true;
      } else {
        stalled = 0;
      }
      pivot(leave, enter);
      if (++iterations_ > iteration_cap_) {
        throw Error(ErrorCode::CyclingGuardExceeded,
                    "simplex exceeded " + std::to_string(iteration_cap_) + " iterations");
      }
    }
  }

  double objective_value() const { return -table_(rows(), cols()); }

  /// Pivots basic artificials out where a non-artificial column allows it.
  /// Rows where none does are redundant and keep their zero artificial.
  void evict_artificials() {
    for (Eigen::Index i = 0; i < rows(); ++i) {
      if (kinds_[basis_[i]] != ColumnKind::Artificial) continue;
      Eigen::Index best = -1;
      double best_abs = options_.pivot_tol;
      for (Eigen::Index j = 0; j < cols(); ++j) {
        if (kinds_[j] == ColumnKind::Artificial) continue;
        if (std::abs(table_(i, j)) > best_abs) {
          best_abs = std::abs(table_(i, j));
          best = j;
        }
      }
      if (best >= 0) pivot(i, best);
    }
  }

  Vector column_values() const {
    Vector v = Vector::Zero(cols());
    for (Eigen::Index i = 0; i < rows(); ++i) v[basis_[i]] = table_(i, cols());
    return v;
  }

  const std::vector<ColumnKind>& kinds() const { return kinds_; }
  const std::vector<Eigen::Index>& positive_columns() const { return var_pos_; }
  const std::vector<Eigen::Index>& negative_columns() const { return var_neg_; }

 private:
  Eigen::Index add_column(ColumnKind kind) {
    kinds_.push_back(kind);
    return static_cast<Eigen::Index>(kinds_.size()) - 1;
  }

  void pivot(Eigen::Index r, Eigen::Index c) {
    table_.row(r) /= table_(r, c);
    for (Eigen::Index i = 0; i < table_.rows(); ++i) {
      if (i == r) continue;
      const double f = table_(i, c);
      if (f != 0.0) table_.row(i) -= f * table_.row(r);
    }
    basis_[r] = c;
  }

  const SimplexOptions& options_;
  Matrix table_;
  std::vector<ColumnKind> kinds_;
  std::vector<Eigen::Index> var_pos_, var_neg_, basis_;
  long iteration_cap_ = 0;
  int iterations_ = 0;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options) {
  const Eigen::Index nv = lp.num_variables();
  if (nv < 1) throw Error(ErrorCode::InvalidProblem, "linear program has no variables");
  if (lp.rows.cols() != nv && lp.num_rows() > 0) {
    throw Error(ErrorCode::InvalidProblem, "constraint matrix width does not match objective");
  }
  if (lp.rhs.size() != lp.num_rows() ||
      static_cast<Eigen::Index>(lp.senses.size()) != lp.num_rows() ||
      static_cast<Eigen::Index>(lp.free.size()) != nv) {
    throw Error(ErrorCode::InvalidProblem, "linear program has inconsistent sizes");
  }
  if (!lp.objective.allFinite() || !lp.rows.allFinite() || !lp.rhs.allFinite()) {
    throw Error(ErrorCode::InvalidProblem, "linear program has non-finite coefficients");
  }

  Tableau tableau(lp, options);
  LpSolution out;

  if (tableau.has_artificials()) {
    Vector phase1 = Vector::Zero(tableau.cols());
    for (Eigen::Index j = 0; j < tableau.cols(); ++j) {
      if (tableau.kinds()[j] == ColumnKind::Artificial) phase1[j] = 1.0;
    }
    tableau.optimize(phase1, true);
    if (tableau.objective_value() > options.feasibility_tol) {
      out.status = LpStatus::Infeasible;
      out.iterations = tableau.iterations();
      return out;
    }
    tableau.evict_artificials();
  }

  Vector cost = Vector::Zero(tableau.cols());
  for (Eigen::Index j = 0; j < nv; ++j) {
    cost[tableau.positive_columns()[j]] = lp.objective[j];
    if (tableau.negative_columns()[j] >= 0) cost[tableau.negative_columns()[j]] = -lp.objective[j];
  }
  const bool bounded = tableau.optimize(cost, false);
  out.iterations = tableau.iterations();
  if (!bounded) {
    out.status = LpStatus::Unbounded;
    return out;
  }

  const Vector values = tableau.column_values();
  out.x.resize(nv);
  for (Eigen::Index j = 0; j < nv; ++j) {
    out.x[j] = values[tableau.positive_columns()[j]];
    if (tableau.negative_columns()[j] >= 0) out.x[j] -= values[tableau.negative_columns()[j]];
  }
  out.objective = lp.objective.dot(out.x);
  out.status = LpStatus::Optimal;
  return out;
}

}  // namespace linmvn
