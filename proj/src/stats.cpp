#include "linmvn/stats.hpp"

#include "linmvn/error.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <iomanip>
#include <limits>
#include <sstream>

namespace linmvn {

double effective_sample_size(const std::vector<double>& series) {
  const std::size_t n = series.size();
  if (n < 2) return static_cast<double>(n);
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> centered(n);
  for (std::size_t i = 0; i < n; ++i) centered[i] = series[i] - mean;

  // Autocovariance by zero-padded FFT.
  std::size_t padded = 1;
  while (padded < 2 * n) padded <<= 1;
  centered.resize(padded, 0.0);
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spectrum;
  fft.fwd(spectrum, centered);
  for (auto& c : spectrum) c = std::norm(c);
  std::vector<double> acov;
  fft.inv(acov, spectrum);
  auto autocov = [&](std::size_t lag) { return acov[lag] / static_cast<double>(n); };
  const double var0 = autocov(0);
  if (!(var0 > 0.0)) return static_cast<double>(n);

  // Geyer: sum paired autocorrelations while positive, forced monotone.
  double sum = 0.0;
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t lag = 0; lag + 1 < n; lag += 2) {
    double pair = (autocov(lag) + autocov(lag + 1)) / var0;
    if (pair <= 0.0) break;
    pair = std::min(pair, previous);
    sum += pair;
    previous = pair;
  }
  const double tau = std::max(-1.0 + 2.0 * sum, 1.0 / static_cast<double>(n));
  return std::clamp(static_cast<double>(n) / tau, 1.0, static_cast<double>(n));
}

SampleStats sample_stats(const std::vector<Vector>& samples, const StatsOptions& options) {
  if (samples.size() < 2) {
    throw Error(ErrorCode::InvalidProblem, "statistics need at least two samples");
  }
  const std::size_t count = samples.size();
  const Eigen::Index n = samples.front().size();
  const double inv = 1.0 / static_cast<double>(count);

  SampleStats out;
  out.count = count;
  out.mean = Vector::Zero(n);
  for (const auto& s : samples) out.mean += s;
  out.mean *= inv;

  out.covariance = Matrix::Zero(n, n);
  for (const auto& s : samples) {
    const Vector c = s - out.mean;
    out.covariance.selfadjointView<Eigen::Lower>().rankUpdate(c);
  }
  out.covariance = out.covariance.selfadjointView<Eigen::Lower>();
  out.covariance /= static_cast<double>(count - 1);

  if (!(out.covariance.diagonal().maxCoeff() > 0.0)) {
    throw Error(ErrorCode::DegenerateSamples, "all samples are identical (point mass)");
  }

  out.ess = Vector::Constant(n, static_cast<double>(count));
  if (options.estimate_ess) {
    std::vector<double> series(count);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < count; ++i) series[i] = samples[i][j];
      out.ess[j] = effective_sample_size(series);
    }
  }
  out.mean_se = (out.covariance.diagonal().array() / out.ess.array()).sqrt();
  return out;
}

namespace {

double covariance_se(const Matrix& cov, Eigen::Index i, Eigen::Index j, double ess) {
  return std::sqrt((cov(i, i) * cov(j, j) + cov(i, j) * cov(i, j)) / ess);
}

void finish(ElementComparison& e, double sigma_level, ComparisonReport& report) {
  const double diff = std::abs(e.a - e.b);
  if (e.se > 0.0) {
    e.z = diff / e.se;
  } else {
    e.z = diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  e.pass = e.z <= sigma_level;
  report.max_z = std::max(report.max_z, e.z);
  report.all_pass = report.all_pass && e.pass;
  report.elements.push_back(e);
}

std::string mean_label(Eigen::Index i) { return "mean[" + std::to_string(i + 1) + "]"; }
std::string cov_label(Eigen::Index i, Eigen::Index j) {
  return "cov[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "]";
}

}  // namespace

ComparisonReport compare_stats(const SampleStats& a, const SampleStats& b, double sigma_level) {
  if (a.mean.size() != b.mean.size()) {
    throw Error(ErrorCode::InvalidProblem, "cannot compare statistics of different dimension");
  }
  ComparisonReport report;
  report.sigma_level = sigma_level;
  const Eigen::Index n = a.mean.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    ElementComparison e{mean_label(i), a.mean[i], b.mean[i],
                        std::hypot(a.mean_se[i], b.mean_se[i])};
    finish(e, sigma_level, report);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double se_a = covariance_se(a.covariance, i, j, std::min(a.ess[i], a.ess[j]));
      const double se_b = covariance_se(b.covariance, i, j, std::min(b.ess[i], b.ess[j]));
      ElementComparison e{cov_label(i, j), a.covariance(i, j), b.covariance(i, j),
                          std::hypot(se_a, se_b)};
      finish(e, sigma_level, report);
    }
  }
  return report;
}

ComparisonReport compare_stats(const SampleStats& a, const Vector& mean, const Matrix& covariance,
                               double sigma_level) {
  if (a.mean.size() != mean.size() || covariance.rows() != mean.size() ||
      covariance.cols() != mean.size()) {
    throw Error(ErrorCode::InvalidProblem, "reference moments have the wrong dimension");
  }
  ComparisonReport report;
  report.sigma_level = sigma_level;
  const Eigen::Index n = mean.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    ElementComparison e{mean_label(i), a.mean[i], mean[i], a.mean_se[i]};
    finish(e, sigma_level, report);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      ElementComparison e{cov_label(i, j), a.covariance(i, j), covariance(i, j),
                          covariance_se(a.covariance, i, j, std::min(a.ess[i], a.ess[j]))};
      finish(e, sigma_level, report);
    }
  }
  return report;
}

std::string ComparisonReport::table() const {
  std::ostringstream os;
  os << std::left << std::setw(12) << "element" << std::right << std::setw(16) << "method"
     << std::setw(16) << "reference" << std::setw(14) << "se" << std::setw(10) << "z"
     << "  result\n";
  os << std::setprecision(6);
  for (const auto& e : elements) {
    os << std::left << std::setw(12) << e.label << std::right << std::setw(16) << e.a
       << std::setw(16) << e.b << std::setw(14) << e.se << std::setw(10) << std::fixed
       << std::setprecision(3) << e.z << std::defaultfloat << std::setprecision(6) << "  "
       << (e.pass ? "pass" : "FAIL") << "\n";
  }
  os << "max z = " << std::fixed << std::setprecision(3) << max_z << " (sigma level "
     << sigma_level << "): " << (all_pass ? "all elements agree" : "disagreement") << "\n";
  return os.str();
}

nlohmann::json ComparisonReport::to_json() const {
  nlohmann::json elems = nlohmann::json::array();
  for (const auto& e : elements) {
    elems.push_back({{"element", e.label},
                     {"method", e.a},
                     {"reference", e.b},
                     {"se", e.se},
                     {"z", e.z},
                     {"pass", e.pass}});
  }
  return {{"sigma_level", sigma_level}, {"max_z", max_z}, {"all_pass", all_pass},
          {"elements", elems}};
}

}  // namespace linmvn
