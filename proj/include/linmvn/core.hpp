#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

namespace linmvn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// xoshiro256++ (Blackman and Vigna), state filled from splitmix64.
/// Satisfies UniformRandomBitGenerator.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed) {
    for (auto& word : state_) word = splitmix64(seed);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t state_[4];
};

/// Seeded xoshiro256++ stream with Boost's ziggurat normals. Boost's
/// distributions are used instead of <random>'s so that a given seed yields
/// the same stream on every standard library.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  /// Independent stream keyed on (seed, stream); used for chunked oracles.
  RandomSource(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t seed() const noexcept { return seed_; }

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }

  /// Fills `out` with independent standard normal draws.
  void fill_normal(Eigen::Ref<Vector> out) {
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = normal_(engine_);
  }

 private:
  std::uint64_t seed_;
  Xoshiro256 engine_;
  boost::random::normal_distribution<double> normal_{0.0, 1.0};
  boost::random::uniform_01<double> uniform_;
};

/// Square root of a covariance matrix: factor * factor^T == covariance.
/// The factor is lower triangular when the covariance is positive definite and
/// an eigenvector-based square root otherwise.
struct CovarianceFactor {
  Matrix factor;
  Eigen::Index rank = 0;
  bool triangular = false;

  Eigen::Index dimension() const { return factor.rows(); }
};

/// Absolute tolerance 1e-10 scaled by the largest absolute entry of `m`.
double default_tolerance(const Matrix& m);

/// Cholesky first; eigen square root if Cholesky fails or a pivot is tiny.
/// Eigenvalues in [-tol, 0) are clamped to zero. A negative `tol` selects
/// default_tolerance(covariance).
CovarianceFactor factor_covariance(const Matrix& covariance, double tol = -1.0);

/// factor * w with w ~ N(0, I).
Vector sample_mvn_zero(const CovarianceFactor& factor, RandomSource& rng);

/// Number of singular values strictly above tol * (largest singular value).
Eigen::Index matrix_rank(const Matrix& m, double tol = 1e-10);

bool all_finite(const Matrix& m);

}  // namespace linmvn
