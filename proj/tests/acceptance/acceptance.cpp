// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include "linmvn/cli.hpp"
#include "linmvn/error.hpp"
#include "linmvn/feasibility.hpp"
#include "linmvn/fixtures.hpp"
#include "linmvn/liness.hpp"
#include "linmvn/oracles.hpp"
#include "linmvn/sampler.hpp"
#include "linmvn/stats.hpp"

#include "../support/arc_check.hpp"
#include "../support/brute_force.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

using namespace linmvn;
using fixtures::PentagonCase;

namespace {

constexpr std::size_t kSamples = 1000000;
constexpr double kSigma = 4.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

StatsOptions independent() {
  StatsOptions o;
  o.estimate_ess = false;
  return o;
}

// Method draws for each fixture, shared by criteria 3, 4 and 6.
struct MethodRun {
  std::vector<Vector> draws;
  bool independent = true;
};

MethodRun& method_run(PentagonCase which) {
  static std::map<PentagonCase, MethodRun> cache;
  auto it = cache.find(which);
  if (it != cache.end()) return it->second;
  RandomSource rng(1000 + static_cast<std::uint64_t>(which));
  SamplingOutcome o = sample_constrained(fixtures::pentagon(which), kSamples, rng);
  MethodRun run;
  run.draws = std::move(std::get<Samples>(o.result).draws);
  run.independent = o.report.independent;
  return cache.emplace(which, std::move(run)).first->second;
}

SampleStats method_stats(PentagonCase which) {
  const MethodRun& run = method_run(which);
  StatsOptions o;
  o.estimate_ess = !run.independent;
  return sample_stats(run.draws, o);
}

Outcome criterion_1() {
  const ProblemSpec spec = fixtures::pentagon(PentagonCase::InequalityOnly);
  RandomSource rng(11);
  Stopwatch clock;
  const RejectionReport r = RejectionSampler(spec).run(10000000, rng, false);
  const double secs = clock.seconds();
  const bool ok = r.acceptance_rate >= 2e-5 && r.acceptance_rate <= 1.2e-4 && secs < 120.0;
  return {ok, "rate " + fmt("%.3e", r.acceptance_rate) + " (" + std::to_string(r.accepted) +
                  "/1e7), " + fmt("%.1f s", secs)};
}

Outcome criterion_2() {
  const ProblemSpec spec = fixtures::pentagon(PentagonCase::Combined);
  RandomSource rng(12);
  Stopwatch clock;
  const RejectionReport r = ConditionalPlaneSampler(spec).run(
      1000000, rng, InequalityFilter{spec.ineq_matrix, spec.ineq_offset});
  const double secs = clock.seconds();
  const bool ok = std::abs(r.acceptance_rate - 0.12) <= 0.02 && secs < 60.0;
  return {ok, "rate " + fmt("%.4f", r.acceptance_rate) + ", " + fmt("%.1f s", secs)};
}

Outcome criterion_3() {
  bool ok = true;
  std::ostringstream detail;

  {
    const ProblemSpec spec = fixtures::pentagon(PentagonCase::InequalityOnly);
    RandomSource rng(31);
    const RejectionReport oracle = RejectionSampler(spec).run_until(kSamples, rng);
    const ComparisonReport r =
        compare_stats(method_stats(PentagonCase::InequalityOnly),
                      sample_stats(oracle.samples, independent()), kSigma);
    ok = ok && r.all_pass && oracle.accepted == kSamples;
    detail << "(i) max z " << fmt("%.2f", r.max_z) << " vs rejection ("
           << fmt("%.2e", static_cast<double>(oracle.proposals)) << " proposals)";
    if (!r.all_pass) std::fprintf(stderr, "%s", r.table().c_str());
  }
  {
    const ProblemSpec spec = fixtures::pentagon(PentagonCase::EqualityOnly);
    RandomSource rng(32);
    const RejectionReport oracle = ConditionalPlaneSampler(spec).run(kSamples, rng);
    const ComparisonReport r = compare_stats(method_stats(PentagonCase::EqualityOnly),
                                             sample_stats(oracle.samples, independent()), kSigma);
    ok = ok && r.all_pass;
    detail << "; (ii) max z " << fmt("%.2f", r.max_z);
    if (!r.all_pass) std::fprintf(stderr, "%s", r.table().c_str());
  }
  {
    const ProblemSpec spec = fixtures::pentagon(PentagonCase::Combined);
    RandomSource rng(33);
    const RejectionReport oracle = ConditionalPlaneSampler(spec).run_until(
        kSamples, rng, InequalityFilter{spec.ineq_matrix, spec.ineq_offset});
    const ComparisonReport r = compare_stats(method_stats(PentagonCase::Combined),
                                             sample_stats(oracle.samples, independent()), kSigma);
    ok = ok && r.all_pass && oracle.accepted == kSamples;
    detail << "; (iii) max z " << fmt("%.2f", r.max_z);
    if (!r.all_pass) std::fprintf(stderr, "%s", r.table().c_str());
  }
  return {ok, detail.str()};
}

Outcome criterion_4() {
  bool ok = true;
  std::ostringstream detail;
  for (auto which : {PentagonCase::InequalityOnly, PentagonCase::EqualityOnly,
                     PentagonCase::Combined}) {
    const ProblemSpec spec = fixtures::pentagon(which);
    const auto& draws = method_run(which).draws;
    double worst_eq = 0.0;
    double worst_ineq = INFINITY;
    for (const auto& x : draws) {
      if (spec.num_equalities() > 0) {
        worst_eq = std::max(worst_eq, (spec.eq_matrix * x + spec.eq_offset).cwiseAbs().maxCoeff());
      }
      if (spec.num_inequalities() > 0) {
        worst_ineq = std::min(worst_ineq, (spec.ineq_matrix * x + spec.ineq_offset).minCoeff());
      }
    }
    const bool case_ok = draws.size() == kSamples && worst_eq <= 1e-8 &&
                         (spec.num_inequalities() == 0 || worst_ineq >= -1e-6);
    ok = ok && case_ok;
    detail << fixtures::case_name(which) << ": max|Cx+d| " << fmt("%.1e", worst_eq);
    if (spec.num_inequalities() > 0) detail << ", min(Ax+b) " << fmt("%.2e", worst_ineq);
    detail << "; ";
  }
  return {ok, detail.str()};
}

Outcome criterion_5() {
  TransformedProblem t;
  t.projection = Matrix::Identity(1, 1);
  t.shift = Vector::Zero(1);
  t.ineq_matrix = Matrix::Ones(1, 1);
  t.ineq_offset = Vector::Zero(1);
  const CovarianceFactor f = factor_covariance(Matrix::Identity(1, 1));
  RandomSource rng(5);
  const std::vector<Vector> ys = run_chain(t, f, Vector::Constant(1, 1.0), 100000, rng);
  const SampleStats s = sample_stats(ys);

  const double mean = std::sqrt(2.0 / std::numbers::pi);
  const double var = 1.0 - 2.0 / std::numbers::pi;
  double central4 = 0.0;
  for (const auto& y : ys) central4 += std::pow(y[0] - s.mean[0], 4);
  central4 /= static_cast<double>(ys.size());
  const double var_se = std::sqrt((central4 - var * var) / s.ess[0]);
  const double z_mean = std::abs(s.mean[0] - mean) / s.mean_se[0];
  const double z_var = std::abs(s.covariance(0, 0) - var) / var_se;
  return {z_mean <= kSigma && z_var <= kSigma,
          "mean " + fmt("%.5f", s.mean[0]) + " (z " + fmt("%.2f", z_mean) + "), var " +
              fmt("%.5f", s.covariance(0, 0)) + " (z " + fmt("%.2f", z_var) + "), ess " +
              fmt("%.0f", s.ess[0])};
}

Outcome criterion_6() {
  const ProblemSpec spec = fixtures::pentagon(PentagonCase::EqualityOnly);
  const TransformedProblem t = build_transform(spec);
  const Matrix& f = t.projection;
  const Matrix fsf = f * spec.covariance * f.transpose();
  const double id1 = (spec.eq_matrix * f).cwiseAbs().maxCoeff();
  const double id2 = (spec.eq_matrix * t.shift + spec.eq_offset).cwiseAbs().maxCoeff();
  const double id3 = (fsf - f * spec.covariance).cwiseAbs().maxCoeff();
  const double id4 = (f * f - f).cwiseAbs().maxCoeff();
  const double worst_identity = std::max({id1, id2, id3, id4});

  const ComparisonReport r = compare_stats(method_stats(PentagonCase::EqualityOnly), t.shift, fsf,
                                           kSigma);
  if (!r.all_pass) std::fprintf(stderr, "%s", r.table().c_str());
  return {r.all_pass && worst_identity <= 1e-8,
          "moments max z " + fmt("%.2f", r.max_z) + ", identities max residual " +
              fmt("%.1e", worst_identity)};
}

std::string classify(const Matrix& h, const Vector& k) {
  try {
    const FeasibilityResult r = find_feasible_point(h, k);
    if (std::holds_alternative<Infeasible>(r)) return "Infeasible";
    if (std::holds_alternative<PointMass>(r)) return "PointMass";
    return "FullDimensional";
  } catch (const Error& e) {
    return std::string(error_name(e.code()));
  }
}

std::string grid_classify(const Matrix& h, const Vector& k, double lo0, double hi0, double lo1,
                          double hi1) {
  brute::Rows rows(static_cast<std::size_t>(h.rows()));
  for (Eigen::Index i = 0; i < h.rows(); ++i) rows[i] = {h(i, 0), h(i, 1)};
  std::vector<double> kv(k.data(), k.data() + k.size());
  const brute::GridCount g = brute::grid_feasibility_2d(rows, kv, lo0, hi0, lo1, hi1, 1000, 1e-12);
  if (g.strict > 0) return "FullDimensional";
  return g.weak > 0 ? "PointMass" : "Infeasible";
}

Outcome criterion_7() {
  bool ok = true;
  std::ostringstream detail;
  auto expect = [&](const char* name, const std::string& got, const std::string& want) {
    ok = ok && got == want;
    detail << name << "=" << got << (got == want ? "" : " (want " + want + ")") << "; ";
  };

  Matrix h1(2, 1);
  h1 << 1, -1;
  Vector k_inf(2), k_pt(2);
  k_inf << -1, 0;
  k_pt << 0, 0;
  expect("infeasible pair", classify(h1, k_inf), "Infeasible");
  expect("point-mass pair", classify(h1, k_pt), "PointMass");
  const ProblemSpec ineq = fixtures::pentagon(PentagonCase::InequalityOnly);
  const TransformedProblem t = build_transform(ineq);
  expect("pentagon", classify(t.ineq_matrix, t.ineq_offset), "FullDimensional");

  // 2-D cases with grid confirmation. The grid hits (1, 2) and the
  // pentagon interior exactly or with margin.
  Matrix h_inf(2, 2);
  h_inf << 1, 1, -1, -1;
  Vector kk_inf(2);
  kk_inf << -1, 0;
  Matrix h_pt(4, 2);
  h_pt << 1, 0, -1, 0, 0, 1, 0, -1;
  Vector kk_pt(4);
  kk_pt << -1, 1, -2, 2;
  const ProblemSpec comb = fixtures::pentagon(PentagonCase::Combined);
  const ValidationTransform vt = fixtures::pentagon_transform();
  const Matrix t_inv = vt.t.inverse();
  const Matrix h_pent = comb.ineq_matrix * t_inv.leftCols(2);
  const Vector k_pent = comb.ineq_offset - comb.ineq_matrix * t_inv * vt.offset;

  struct Case2 {
    const char* name;
    Matrix h;
    Vector k;
  };
  for (const Case2& c : {Case2{"2-D infeasible", h_inf, kk_inf}, Case2{"2-D point", h_pt, kk_pt},
                         Case2{"2-D pentagon plane", h_pent, k_pent}}) {
    expect(c.name, classify(c.h, c.k), grid_classify(c.h, c.k, -20, 20, -20, 20));
  }
  return {ok, detail.str()};
}

Outcome criterion_8() {
  RandomSource rng(8);
  double worst = 0.0;
  int failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const arc_check::Instance in = arc_check::random_instance(rng);
    double mismatch = INFINITY;
    try {
      mismatch = arc_check::boundary_mismatch(in, active_arcs(in.y, in.nu, in.h, in.k));
    } catch (const Error&) {
    }
    worst = std::max(worst, mismatch);
    failures += !(mismatch < 1e-3);
  }
  return {failures == 0,
          "1000 instances, worst boundary mismatch " + fmt("%.2e", worst) + " rad"};
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion_9() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "linmvn_acceptance";
  fs::create_directories(dir);
  const std::string problem = std::string(LINMVN_FIXTURE_DIR) + "/pentagon_combined.json";
  std::string csv[2];
  for (int run = 0; run < 2; ++run) {
    const fs::path out = dir / ("run" + std::to_string(run) + ".csv");
    fs::remove(out);
    const std::string cmd = std::string("\"") + LINMVN_CLI_PATH + "\" sample --problem \"" +
                            problem + "\" --n 100000 --seed 2024 --out \"" + out.string() +
                            "\" > /dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0) return {false, "cli run failed: " + cmd};
    csv[run] = read_file(out);
  }
  const bool ok = !csv[0].empty() && csv[0] == csv[1];
  return {ok, "two runs, " + std::to_string(csv[0].size()) + " bytes each, " +
                  (ok ? "identical" : "different")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"rejection acceptance rate on pentagon inequalities", criterion_1},
      {"conditional-plane acceptance rate", criterion_2},
      {"method vs oracle moments, three fixtures", criterion_3},
      {"exact constraint satisfaction", criterion_4},
      {"half-normal moments from the slice chain", criterion_5},
      {"equality-only closed form and identities", criterion_6},
      {"feasibility classifier with grid confirmation", criterion_7},
      {"arc computation vs theta-grid oracle", criterion_8},
      {"byte-identical CSV for identical seeds", criterion_9},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Stopwatch clock;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %zu  %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str(), clock.seconds());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
