#include "linmvn/transform.hpp"

#include "linmvn/error.hpp"

#include <string>

namespace linmvn {

namespace {

std::string shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

ProblemSpec ProblemSpec::unconstrained(Vector mean, Matrix covariance) {
  ProblemSpec spec;
  const Eigen::Index n = mean.size();
  spec.mean = std::move(mean);
  spec.covariance = std::move(covariance);
  spec.ineq_matrix = Matrix(0, n);
  spec.ineq_offset = Vector(0);
  spec.eq_matrix = Matrix(0, n);
  spec.eq_offset = Vector(0);
  return spec;
}

void validate(const ProblemSpec& spec) {
  const Eigen::Index n = spec.dimension();
  if (n < 1) throw Error(ErrorCode::InvalidProblem, "dimension must be at least 1");
  if (spec.covariance.rows() != n || spec.covariance.cols() != n) {
    throw Error(ErrorCode::InvalidProblem,
                "covariance is " + shape(spec.covariance) + ", expected " + std::to_string(n) +
                    "x" + std::to_string(n));
  }
  if (spec.ineq_matrix.cols() != n && spec.ineq_matrix.rows() > 0) {
    throw Error(ErrorCode::InvalidProblem, "A is " + shape(spec.ineq_matrix) +
                                               ", expected " + std::to_string(n) + " columns");
  }
  if (spec.ineq_offset.size() != spec.ineq_matrix.rows()) {
    throw Error(ErrorCode::InvalidProblem, "b has length " +
                                               std::to_string(spec.ineq_offset.size()) +
                                               ", A has " + std::to_string(spec.ineq_matrix.rows()) +
                                               " rows");
  }
  if (spec.eq_matrix.cols() != n && spec.eq_matrix.rows() > 0) {
    throw Error(ErrorCode::InvalidProblem,
                "C is " + shape(spec.eq_matrix) + ", expected " + std::to_string(n) + " columns");
  }
  if (spec.eq_offset.size() != spec.eq_matrix.rows()) {
    throw Error(ErrorCode::InvalidProblem, "d has length " + std::to_string(spec.eq_offset.size()) +
                                               ", C has " + std::to_string(spec.eq_matrix.rows()) +
                                               " rows");
  }
  if (!spec.mean.allFinite() || !spec.covariance.allFinite() || !spec.ineq_matrix.allFinite() ||
      !spec.ineq_offset.allFinite() || !spec.eq_matrix.allFinite() || !spec.eq_offset.allFinite()) {
    throw Error(ErrorCode::InvalidProblem, "problem contains non-finite values");
  }
  factor_covariance(spec.covariance);
}

double equality_tolerance(const Vector& eq_offset) {
  const double scale = eq_offset.size() == 0 ? 0.0 : eq_offset.cwiseAbs().maxCoeff();
  return 1e-8 * (1.0 + scale);
}

EqualityClass classify_equality_system(const Matrix& eq_matrix, const Vector& eq_offset,
                                       double tol) {
  const Eigen::Index n = eq_matrix.cols();
  if (eq_matrix.rows() == 0) {
    return InfiniteSolutions{};
  }
  Matrix augmented(eq_matrix.rows(), n + 1);
  augmented << eq_matrix, -eq_offset;
  const Eigen::Index rank_c = matrix_rank(eq_matrix, tol);
  const Eigen::Index rank_aug = matrix_rank(augmented, tol);
  if (rank_c < rank_aug) return NoSolution{};
  if (rank_c == n) {
    Vector x = eq_matrix.completeOrthogonalDecomposition().solve(-eq_offset);
    return UniqueSolution{std::move(x)};
  }
  return InfiniteSolutions{};
}

std::vector<Eigen::Index> independent_rows(const Matrix& eq_matrix, const Vector& eq_offset,
                                           double tol) {
  Matrix augmented(eq_matrix.rows(), eq_matrix.cols() + 1);
  augmented << eq_matrix, eq_offset;

  std::vector<Eigen::Index> kept;
  Matrix basis(0, augmented.cols());
  for (Eigen::Index i = 0; i < augmented.rows(); ++i) {
    const double norm = augmented.row(i).norm();
    if (norm == 0.0) continue;
    Matrix candidate(basis.rows() + 1, basis.cols());
    candidate << basis, augmented.row(i) / norm;
    if (matrix_rank(candidate, tol) > basis.rows()) {
      basis = std::move(candidate);
      kept.push_back(i);
    }
  }
  return kept;
}

TransformedProblem build_transform(const ProblemSpec& spec) {
  const Eigen::Index n = spec.dimension();
  const Matrix& sigma = spec.covariance;
  const Matrix a = spec.num_inequalities() == 0 ? Matrix(0, n) : spec.ineq_matrix;
  TransformedProblem t;

  if (spec.num_equalities() == 0) {
    t.projection = Matrix::Identity(n, n);
    t.shift = spec.mean;
    t.ineq_matrix = a;
    t.ineq_offset = a * spec.mean + spec.ineq_offset;
    return t;
  }

  const EqualityClass cls = classify_equality_system(spec.eq_matrix, spec.eq_offset);
  if (std::holds_alternative<NoSolution>(cls)) {
    throw Error(ErrorCode::InvalidProblem, "equality system C x + d = 0 has no solution");
  }
  if (std::holds_alternative<UniqueSolution>(cls)) {
    throw Error(ErrorCode::InvalidProblem,
                "equality system C x + d = 0 has a unique solution; no transform needed");
  }

  const auto rows = independent_rows(spec.eq_matrix, spec.eq_offset);
  const Eigen::Index p = static_cast<Eigen::Index>(rows.size());
  Matrix c(p, n);
  Vector d(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    c.row(i) = spec.eq_matrix.row(rows[i]);
    d[i] = spec.eq_offset[rows[i]];
  }

  const Matrix c_sigma = c * sigma;
  const Matrix gram = c_sigma * c.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> gram_eig(gram, Eigen::EigenvaluesOnly);
  const double largest = gram_eig.eigenvalues().maxCoeff();
  if (!(largest > 0.0) || gram_eig.eigenvalues().minCoeff() <= 1e-12 * largest) {
    throw Error(ErrorCode::SingularEqualityGram,
                "C S C^T is singular after removing dependent equality rows");
  }
  Eigen::LLT<Matrix> gram_llt(gram);
  if (gram_llt.info() != Eigen::Success) {
    throw Error(ErrorCode::SingularEqualityGram, "Cholesky of C S C^T failed");
  }

  // S symmetric, so S C^T G^-1 = (G^-1 C S)^T.
  Matrix gain = gram_llt.solve(c_sigma).transpose();
  t.projection = Matrix::Identity(n, n) - gain * c;
  t.shift = t.projection * spec.mean - gain * d;
  t.ineq_matrix = a * t.projection;
  t.ineq_offset = a * t.shift + spec.ineq_offset;
  t.gain = std::move(gain);
  return t;
}

}  // namespace linmvn
