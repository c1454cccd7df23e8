#pragma once

#include "linmvn/core.hpp"
#include "linmvn/transform.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace linmvn {

/// Reference samplers that share no code with the latent transform or the
/// elliptical slice chain. Both produce independent draws.

struct RejectionReport {
  std::size_t proposals = 0;
  std::size_t accepted = 0;
  double acceptance_rate = 0.0;
  std::vector<Vector> samples;
};

/// Naive accept-reject from N(mu, S) restricted to A x + b >= 0.
///
/// Constraint rows are evaluated lazily: with M = A L (L the covariance
/// factor) written as M = R^T Q^T, a proposal is w = Q z with z standard
/// normal, and row i of R^T z only involves z_1..z_i. Coordinates of z are
/// drawn on demand and a proposal stops at its first violated row. Proposals
/// are processed in fixed-size batches, one row at a time. The accepted draws and the acceptance probability are those of drawing
/// x ~ N(mu, S) whole and testing A x + b >= 0; only the cost changes.
class RejectionSampler {
 public:
  /// Requires a spec without equalities.
  explicit RejectionSampler(const ProblemSpec& spec);

  /// Runs exactly `proposals` proposals.
  RejectionReport run(std::size_t proposals, RandomSource& rng, bool keep_samples = true) const;

  /// Proposes until `accepted` draws are kept or `max_proposals` is reached.
  RejectionReport run_until(std::size_t accepted, RandomSource& rng,
                            std::size_t max_proposals =
                                std::numeric_limits<std::size_t>::max()) const;

 private:
  struct Batch;

  // Runs `count` proposals; survivors' indices end up in batch.alive, in order.
  void propose_batch(std::size_t count, RandomSource& rng, Batch& batch) const;
  Vector to_x(const Batch& batch, std::uint32_t index) const;

  Vector mean_;
  Matrix map_;                  // L Q: x = mean + map_ z
  std::vector<double> packed_;  // rows of R^T, row i holds min(i + 1, n) leading entries
  std::vector<double> offsets_; // A mu + b, same order
};

RejectionReport rejection_sample(const ProblemSpec& spec, std::size_t proposals,
                                 RandomSource& rng);

struct InequalityFilter {
  Matrix a;
  Vector b;
};

/// Exact draws from N(mu, S) conditioned on C x + d = 0, built from an
/// orthonormal split of R^n into the row space and null space of C and the
/// Gaussian conditioning formula. An optional filter turns it into
/// accept-reject on the plane.
class ConditionalPlaneSampler {
 public:
  /// Requires at least one equality. Throws Error(InvalidProblem) when
  /// C x + d = 0 is inconsistent or has a single solution, and
  /// Error(SingularEqualityGram) when the row-space covariance is singular.
  explicit ConditionalPlaneSampler(const ProblemSpec& spec, double tol = 1e-10);

  Vector draw(RandomSource& rng) const;

  RejectionReport run(std::size_t proposals, RandomSource& rng,
                      const std::optional<InequalityFilter>& filter = std::nullopt) const;
  RejectionReport run_until(std::size_t accepted, RandomSource& rng,
                            const std::optional<InequalityFilter>& filter = std::nullopt,
                            std::size_t max_proposals =
                                std::numeric_limits<std::size_t>::max()) const;

  const Vector& conditional_mean() const { return mean_; }
  Matrix conditional_covariance() const { return map_ * map_.transpose(); }

 private:
  Vector mean_;
  Matrix map_;  // x = mean_ + map_ w, w ~ N(0, I)
};

RejectionReport conditional_direct_sample(const ProblemSpec& spec, std::size_t proposals,
                                          RandomSource& rng,
                                          const std::optional<InequalityFilter>& filter =
                                              std::nullopt);

/// Validation coordinates x' = T x + offset in which the pentagon fixture's
/// equality plane is x'_3 = x'_4 = 0.
struct ValidationTransform {
  Matrix t;
  Vector offset;
};

Eigen::Vector2d pentagon_plane_coords(const Vector& x, const ValidationTransform& vt);

}  // namespace linmvn
