#include "linmvn/oracles.hpp"

#include "linmvn/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace linmvn {

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

RejectionReport make_report(std::size_t proposals, std::vector<Vector> samples,
                            std::size_t accepted) {
  RejectionReport r;
  r.proposals = proposals;
  r.accepted = accepted;
  r.acceptance_rate =
      proposals == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(proposals);
  r.samples = std::move(samples);
  return r;
}

bool passes(const InequalityFilter& filter, const Vector& x) {
  return ((filter.a * x + filter.b).array() >= 0.0).all();
}

}  // namespace

RejectionSampler::RejectionSampler(const ProblemSpec& spec) {
  validate(spec);
  if (spec.num_equalities() > 0) {
    throw Error(ErrorCode::InvalidProblem,
                "rejection sampling cannot hit equality constraints; use the conditional oracle");
  }
  const Eigen::Index n = spec.dimension();
  const Eigen::Index m = spec.num_inequalities();
  const Matrix factor = factor_covariance(spec.covariance).factor;
  mean_ = spec.mean;

  if (m == 0) {
    map_ = factor;
    return;
  }

  const Matrix whitened = spec.ineq_matrix * factor;
  const Vector offsets = spec.ineq_matrix * spec.mean + spec.ineq_offset;

  // Greedy order on a fixed pilot: each next row is the one that rejects the
  // most surviving pilot proposals, so most proposals stop after a few rows.
  constexpr Eigen::Index kPilot = 1 << 16;
  RandomSource pilot_rng(0x9d2c5680u);
  Matrix pilot(n, kPilot);
  for (Eigen::Index j = 0; j < kPilot; ++j) pilot_rng.fill_normal(pilot.col(j));
  const Matrix values = (whitened * pilot).colwise() + offsets;
  std::vector<Eigen::Index> order;
  std::vector<bool> used(static_cast<std::size_t>(m), false);
  std::vector<Eigen::Index> alive(static_cast<std::size_t>(kPilot));
  std::iota(alive.begin(), alive.end(), Eigen::Index{0});
  while (static_cast<Eigen::Index>(order.size()) < m) {
    Eigen::Index best = -1;
    std::size_t best_pass = 0;
    double best_marginal = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (used[static_cast<std::size_t>(i)]) continue;
      std::size_t pass = 0;
      for (Eigen::Index j : alive) pass += values(i, j) >= 0.0;
      const double scale = whitened.row(i).norm();
      const double marginal =
          scale > 0.0 ? normal_cdf(offsets[i] / scale) : (offsets[i] >= 0.0 ? 1.0 : 0.0);
      if (best < 0 || pass < best_pass || (pass == best_pass && marginal < best_marginal)) {
        best = i;
        best_pass = pass;
        best_marginal = marginal;
      }
    }
    used[static_cast<std::size_t>(best)] = true;
    order.push_back(best);
    alive.erase(std::remove_if(alive.begin(), alive.end(),
                               [&](Eigen::Index j) { return values(best, j) < 0.0; }),
                alive.end());
  }

  Matrix permuted(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    permuted.row(i) = whitened.row(order[i]);
    offsets_.push_back(offsets[order[i]]);
  }
  Eigen::HouseholderQR<Matrix> qr(permuted.transpose());
  const Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix lower = qr.matrixQR().triangularView<Eigen::Upper>().toDenseMatrix().transpose();
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < std::min(i + 1, n); ++j) packed_.push_back(lower(i, j));
  }
  map_ = factor * q;
}

constexpr std::size_t kBatch = 4096;

struct RejectionSampler::Batch {
  std::vector<double> z;  // coordinate-major: z[d * kBatch + j]
  std::vector<double> value;
  std::vector<std::uint32_t> alive;

  explicit Batch(std::size_t dim) : z(dim * kBatch), value(kBatch), alive(kBatch) {}
};

void RejectionSampler::propose_batch(std::size_t count, RandomSource& rng, Batch& batch) const {
  const std::size_t n = static_cast<std::size_t>(map_.cols());
  std::uint32_t* alive = batch.alive.data();
  double* value = batch.value.data();
  std::size_t live = count;
  for (std::size_t j = 0; j < count; ++j) alive[j] = static_cast<std::uint32_t>(j);

  const double* row = packed_.data();
  std::size_t drawn = 0;
  for (std::size_t i = 0; i < offsets_.size() && live > 0; ++i) {
    const std::size_t need = std::min(i + 1, n);
    for (; drawn < need; ++drawn) {
      double* zd = batch.z.data() + drawn * kBatch;
      for (std::size_t k = 0; k < live; ++k) zd[alive[k]] = rng.normal();
    }
    for (std::size_t k = 0; k < live; ++k) value[k] = offsets_[i];
    for (std::size_t j = 0; j < need; ++j) {
      const double* zd = batch.z.data() + j * kBatch;
      const double r = row[j];
      for (std::size_t k = 0; k < live; ++k) value[k] += r * zd[alive[k]];
    }
    std::size_t kept = 0;
    for (std::size_t k = 0; k < live; ++k) {
      alive[kept] = alive[k];
      kept += value[k] >= 0.0;
    }
    live = kept;
    row += need;
  }
  for (; drawn < n; ++drawn) {
    double* zd = batch.z.data() + drawn * kBatch;
    for (std::size_t k = 0; k < live; ++k) zd[alive[k]] = rng.normal();
  }
  batch.alive.resize(live);
}

Vector RejectionSampler::to_x(const Batch& batch, std::uint32_t index) const {
  Vector z(map_.cols());
  for (Eigen::Index d = 0; d < z.size(); ++d) {
    z[d] = batch.z[static_cast<std::size_t>(d) * kBatch + index];
  }
  return mean_ + map_ * z;
}

RejectionReport RejectionSampler::run(std::size_t proposals, RandomSource& rng,
                                      bool keep_samples) const {
  Batch batch(static_cast<std::size_t>(map_.cols()));
  std::vector<Vector> kept;
  std::size_t accepted = 0;
  for (std::size_t done = 0; done < proposals;) {
    const std::size_t count = std::min(kBatch, proposals - done);
    batch.alive.resize(kBatch);
    propose_batch(count, rng, batch);
    accepted += batch.alive.size();
    if (keep_samples) {
      for (std::uint32_t j : batch.alive) kept.push_back(to_x(batch, j));
    }
    done += count;
  }
  return make_report(proposals, std::move(kept), accepted);
}

RejectionReport RejectionSampler::run_until(std::size_t accepted, RandomSource& rng,
                                            std::size_t max_proposals) const {
  Batch batch(static_cast<std::size_t>(map_.cols()));
  std::vector<Vector> kept;
  kept.reserve(accepted);
  std::size_t proposals = 0;
  while (kept.size() < accepted && proposals < max_proposals) {
    const std::size_t count = std::min(kBatch, max_proposals - proposals);
    batch.alive.resize(kBatch);
    propose_batch(count, rng, batch);
    std::size_t used = count;
    for (std::uint32_t j : batch.alive) {
      kept.push_back(to_x(batch, j));
      if (kept.size() == accepted) {
        used = static_cast<std::size_t>(j) + 1;
        break;
      }
    }
    proposals += used;
  }
  const std::size_t count = kept.size();
  return make_report(proposals, std::move(kept), count);
}

RejectionReport rejection_sample(const ProblemSpec& spec, std::size_t proposals,
                                 RandomSource& rng) {
  return RejectionSampler(spec).run(proposals, rng);
}

ConditionalPlaneSampler::ConditionalPlaneSampler(const ProblemSpec& spec, double tol) {
  validate(spec);
  const Eigen::Index n = spec.dimension();
  if (spec.num_equalities() == 0) {
    throw Error(ErrorCode::InvalidProblem, "conditional oracle needs at least one equality");
  }
  const Matrix& c = spec.eq_matrix;

  Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  const Eigen::Index rank = s.size() == 0 || s[0] <= 0.0 ? 0 : (s.array() > tol * s[0]).count();
  if (rank == 0) throw Error(ErrorCode::InvalidProblem, "equality matrix is zero");
  if (rank == n) {
    throw Error(ErrorCode::InvalidProblem, "equality system pins x to a single point");
  }

  const Matrix row_basis = svd.matrixV().leftCols(rank);
  const Matrix null_basis = svd.matrixV().rightCols(n - rank);

  // Row-space coordinate u = R^T x is fixed on the plane.
  const Vector u_plane = s.head(rank).cwiseInverse().asDiagonal() *
                         (svd.matrixU().leftCols(rank).transpose() * (-spec.eq_offset));
  const Vector x_plane = row_basis * u_plane;
  const double residual = (c * x_plane + spec.eq_offset).cwiseAbs().maxCoeff();
  if (residual > equality_tolerance(spec.eq_offset) * std::max(1.0, c.cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::InvalidProblem, "equality system C x + d = 0 is inconsistent");
  }

  // Joint normal of (u, v) = (R^T x, N^T x); condition v on u = u_plane.
  const Matrix& sigma = spec.covariance;
  const Matrix s_uu = row_basis.transpose() * sigma * row_basis;
  const Matrix s_vu = null_basis.transpose() * sigma * row_basis;
  const Matrix s_vv = null_basis.transpose() * sigma * null_basis;
  Eigen::LDLT<Matrix> s_uu_ldlt(s_uu);
  if (s_uu_ldlt.info() != Eigen::Success ||
      s_uu_ldlt.vectorD().cwiseAbs().minCoeff() <= 1e-12 * s_uu.cwiseAbs().maxCoeff()) {
    throw Error(ErrorCode::SingularEqualityGram, "covariance of C x is singular");
  }
  const Matrix regression = s_uu_ldlt.solve(s_vu.transpose()).transpose();  // s_vu s_uu^-1
  const Vector v_mean = null_basis.transpose() * spec.mean +
                        regression * (u_plane - row_basis.transpose() * spec.mean);
  Matrix v_cov = s_vv - regression * s_vu.transpose();
  v_cov = 0.5 * (v_cov + v_cov.transpose());

  mean_ = x_plane + null_basis * v_mean;
  map_ = null_basis * factor_covariance(v_cov).factor;
}

Vector ConditionalPlaneSampler::draw(RandomSource& rng) const {
  Vector w(map_.cols());
  rng.fill_normal(w);
  return mean_ + map_ * w;
}

RejectionReport ConditionalPlaneSampler::run(std::size_t proposals, RandomSource& rng,
                                             const std::optional<InequalityFilter>& filter) const {
  std::vector<Vector> kept;
  for (std::size_t i = 0; i < proposals; ++i) {
    Vector x = draw(rng);
    if (!filter || passes(*filter, x)) kept.push_back(std::move(x));
  }
  const std::size_t count = kept.size();
  return make_report(proposals, std::move(kept), count);
}

RejectionReport ConditionalPlaneSampler::run_until(std::size_t accepted, RandomSource& rng,
                                                   const std::optional<InequalityFilter>& filter,
                                                   std::size_t max_proposals) const {
  std::vector<Vector> kept;
  kept.reserve(accepted);
  std::size_t proposals = 0;
  while (kept.size() < accepted && proposals < max_proposals) {
    ++proposals;
    Vector x = draw(rng);
    if (!filter || passes(*filter, x)) kept.push_back(std::move(x));
  }
  const std::size_t count = kept.size();
  return make_report(proposals, std::move(kept), count);
}

RejectionReport conditional_direct_sample(const ProblemSpec& spec, std::size_t proposals,
                                          RandomSource& rng,
                                          const std::optional<InequalityFilter>& filter) {
  return ConditionalPlaneSampler(spec).run(proposals, rng, filter);
}

Eigen::Vector2d pentagon_plane_coords(const Vector& x, const ValidationTransform& vt) {
  const Vector full = vt.t * x + vt.offset;
  return full.head<2>();
}

}  // namespace linmvn
