#pragma once

#include "linmvn/core.hpp"

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"

namespace linmvn {

/// Sample mean and covariance (divisor N - 1) with per-coordinate effective
/// sample sizes and mean standard errors sqrt(var_i / ess_i).
struct SampleStats {
  std::size_t count = 0;
  Vector mean;
  Matrix covariance;
  Vector mean_se;
  Vector ess;
};

struct StatsOptions {
  /// False treats the samples as independent (ess = N); true estimates ESS
  /// from the autocorrelation with Geyer's initial monotone sequence.
  bool estimate_ess = true;
};

/// Throws Error(DegenerateSamples) when every sample is identical and
/// Error(InvalidProblem) for fewer than two samples.
SampleStats sample_stats(const std::vector<Vector>& samples, const StatsOptions& options = {});

/// Integrated-autocorrelation ESS of one scalar series, clamped to [1, N].
double effective_sample_size(const std::vector<double>& series);

struct ElementComparison {
  std::string label;  // "mean[i]" or "cov[i,j]", 1-based
  double a = 0.0;
  double b = 0.0;
  double se = 0.0;    // combined standard error
  double z = 0.0;
  bool pass = false;
};

struct ComparisonReport {
  double sigma_level = 4.0;
  std::vector<ElementComparison> elements;
  double max_z = 0.0;
  bool all_pass = true;

  std::string table() const;
  nlohmann::json to_json() const;
};

/// Mean elements and upper-triangle covariance elements compared against
/// combined standard errors; covariance-element se uses the Gaussian
/// approximation sqrt((s_ii s_jj + s_ij^2) / ess) with ess = min(ess_i, ess_j).
ComparisonReport compare_stats(const SampleStats& a, const SampleStats& b, double sigma_level);

/// Same test against exactly known moments (zero standard error on that side).
ComparisonReport compare_stats(const SampleStats& a, const Vector& mean, const Matrix& covariance,
                               double sigma_level);

}  // namespace linmvn
