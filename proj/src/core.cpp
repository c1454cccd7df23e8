#include "linmvn/core.hpp"

#include "linmvn/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace linmvn {

namespace {

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t a = seed;
  std::uint64_t b = ~stream;
  return Xoshiro256::splitmix64(a) ^ (Xoshiro256::splitmix64(b) * 0xd1342543de82ef95ULL);
}

}  // namespace

RandomSource::RandomSource(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), engine_(stream_key(seed, stream)) {}

bool all_finite(const Matrix& m) { return m.allFinite(); }

double default_tolerance(const Matrix& m) {
  const double scale = m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
  return 1e-10 * std::max(scale, 1.0);
}

CovarianceFactor factor_covariance(const Matrix& covariance, double tol) {
  if (covariance.rows() != covariance.cols()) {
    throw Error(ErrorCode::InvalidProblem, "covariance must be square, got " +
                                               std::to_string(covariance.rows()) + "x" +
                                               std::to_string(covariance.cols()));
  }
  if (!covariance.allFinite()) {
    throw Error(ErrorCode::InvalidProblem, "covariance has non-finite entries");
  }
  if (tol < 0.0) tol = default_tolerance(covariance);

  const Eigen::Index n = covariance.rows();
  CovarianceFactor out;
  if (n == 0) return out;

  const double asym = (covariance - covariance.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol) {
    throw Error(ErrorCode::NotSymmetric, "max |S - S^T| = " + std::to_string(asym));
  }
  const Matrix sym = 0.5 * (covariance + covariance.transpose());

  Eigen::LLT<Matrix> llt(sym);
  if (llt.info() == Eigen::Success) {
    Matrix lower = llt.matrixL();
    if (lower.diagonal().array().square().minCoeff() > tol) {
      out.factor = std::move(lower);
      out.rank = n;
      out.triangular = true;
      return out;
    }
  }

  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPsd, "eigendecomposition failed");
  }
  Vector values = eig.eigenvalues();
  if (values.minCoeff() < -tol) {
    throw Error(ErrorCode::NotPsd, "eigenvalue " + std::to_string(values.minCoeff()) +
                                       " below -" + std::to_string(tol));
  }
  values = values.cwiseMax(0.0);
  out.rank = (values.array() > tol).count();
  out.factor = eig.eigenvectors() * values.cwiseSqrt().asDiagonal();
  out.triangular = false;
  return out;
}

Vector sample_mvn_zero(const CovarianceFactor& factor, RandomSource& rng) {
  Vector w(factor.factor.cols());
  rng.fill_normal(w);
  return factor.factor * w;
}

Eigen::Index matrix_rank(const Matrix& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  if (s.size() == 0 || s[0] <= 0.0) return 0;
  return (s.array() > tol * s[0]).count();
}

}  // namespace linmvn
