#pragma once

#include "linmvn/core.hpp"
#include "linmvn/transform.hpp"

#include <cstddef>
#include <vector>

namespace linmvn {

/// Closed angle interval inside [-pi, pi).
struct AngleInterval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double theta) const { return lo <= theta && theta <= hi; }
};

/// Sorted, disjoint union of angle intervals.
struct ArcSet {
  std::vector<AngleInterval> intervals;

  double measure() const;
  bool contains(double theta) const;
  /// Maps u in [0, measure()) onto the union by walking the intervals.
  double at_measure(double u) const;
};

/// Slack at or above -kFeasibilityTol counts as feasible.
inline constexpr double kFeasibilityTol = 1e-9;

/// {theta : H (y cos theta + nu sin theta) + k >= 0} as a subset of [-pi, pi).
/// Constraints the current point satisfies within kFeasibilityTol always keep
/// theta = 0. Throws Error(EmptyArcSet) when the intersection has zero measure.
ArcSet active_arcs(const Vector& y, const Vector& nu, const Matrix& h, const Vector& k);

struct ChainState {
  Vector y;
  RandomSource rng;
  std::size_t step_count = 0;
};

/// One rejection-free elliptical slice step: a single auxiliary draw
/// nu ~ N(0, S) and a single angle drawn uniformly over the feasible arcs.
void liness_step(ChainState& state, const TransformedProblem& t, const CovarianceFactor& factor);

struct ChainOptions {
  std::size_t burn_in = 0;
  std::size_t thin = 1;
};

/// Returns n consecutive latent states after y0 (y0 excluded). Burn-in steps
/// are discarded first, then every `thin`-th state is kept.
std::vector<Vector> run_chain(const TransformedProblem& t, const CovarianceFactor& factor,
                              const Vector& y0, std::size_t n, RandomSource& rng,
                              const ChainOptions& options = {});

}  // namespace linmvn
