#include "linmvn/cli.hpp"

#include "linmvn/error.hpp"
#include "linmvn/feasibility.hpp"
#include "linmvn/fixtures.hpp"
#include "linmvn/oracles.hpp"
#include "linmvn/problem_io.hpp"
#include "linmvn/sampler.hpp"
#include "linmvn/stats.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <stdexcept>

namespace linmvn {

namespace {

struct SampleArgs {
  std::string problem;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::size_t burn_in = 0;
  std::size_t thin = 1;
  std::size_t chains = 1;
  std::string out = "samples.csv";
};

struct CompareArgs {
  std::string problem;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string oracle;
  double sigma = 4.0;
  std::size_t burn_in = 0;
  std::size_t thin = 1;
  std::size_t chains = 1;
  double max_proposals = 1e11;
  std::string json_out;
};

void print_vector(std::ostream& os, const Vector& v) {
  os << "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << "]";
}

void print_stats(std::ostream& os, const SampleStats& s) {
  const auto old = os.precision(8);
  os << "samples: " << s.count << "\n";
  os << "mean: ";
  print_vector(os, s.mean);
  os << "\nmean_se: ";
  print_vector(os, s.mean_se);
  os << "\ness: ";
  print_vector(os, s.ess);
  os << "\ncovariance:\n";
  for (Eigen::Index i = 0; i < s.covariance.rows(); ++i) {
    os << "  ";
    print_vector(os, s.covariance.row(i).transpose());
    os << "\n";
  }
  os.precision(old);
}

SamplerOptions sampler_options(std::size_t burn_in, std::size_t thin, std::size_t chains) {
  SamplerOptions opts;
  opts.chain.burn_in = burn_in;
  opts.chain.thin = thin;
  opts.chains = chains;
  return opts;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidProblem:
    case ErrorCode::NotSymmetric:
    case ErrorCode::NotPsd:
      return kExitMalformedInput;
    default:
      return kExitNumericalFailure;
  }
}

int cmd_sample(const SampleArgs& args, std::ostream& out, std::ostream& err) {
  const ProblemFile problem = load_problem(args.problem);
  RandomSource rng(args.seed);
  const SamplingOutcome outcome = sample_constrained(
      problem.spec, args.n, rng, sampler_options(args.burn_in, args.thin, args.chains));

  std::ostream& report = args.out == "-" ? err : out;
  report << "recipe: " << recipe_name(outcome.report.recipe) << "\n";
  report << "classification: " << outcome.report.classification << "\n";

  if (const auto* impossible = std::get_if<Impossible>(&outcome.result)) {
    err << "impossible: " << impossible->reason << "\n";
    return kExitInfeasible;
  }

  std::vector<Vector> draws;
  if (const auto* point = std::get_if<PointMassAt>(&outcome.result)) {
    draws.assign(args.n, point->x);
    report << "point mass at x = ";
    print_vector(report, point->x);
    report << "\n";
  } else {
    draws = std::get<Samples>(outcome.result).draws;
  }

  if (args.out == "-") {
    write_samples_csv(out, draws, problem.spec.dimension());
  } else {
    std::ofstream csv(args.out, std::ios::binary);
    if (!csv) throw Error(ErrorCode::InvalidProblem, "cannot write '" + args.out + "'");
    write_samples_csv(csv, draws, problem.spec.dimension());
    report << "wrote " << draws.size() << " samples to " << args.out << "\n";
  }

  if (std::holds_alternative<Samples>(outcome.result) && draws.size() >= 2) {
    StatsOptions so;
    so.estimate_ess = !outcome.report.independent;
    print_stats(report, sample_stats(draws, so));
  }
  report << "chain steps: " << outcome.report.chain_length << "\n";
  report << "seconds: " << outcome.report.seconds << "\n";
  return kExitOk;
}

int cmd_check(const std::string& path, std::ostream& out, std::ostream& err) {
  const ProblemFile problem = load_problem(path);
  const ProblemSpec& spec = problem.spec;
  out << "n = " << spec.dimension() << ", inequalities m = " << spec.num_inequalities()
      << ", equalities p = " << spec.num_equalities() << "\n";

  if (spec.num_equalities() > 0) {
    const EqualityClass cls = classify_equality_system(spec.eq_matrix, spec.eq_offset);
    if (std::holds_alternative<NoSolution>(cls)) {
      out << "equality system: NoSolution\n";
      out << "classification: Impossible\n";
      err << "impossible: equality system C x + d = 0 has zero solutions\n";
      return kExitInfeasible;
    }
    if (const auto* unique = std::get_if<UniqueSolution>(&cls)) {
      out << "equality system: Unique\n";
      if (spec.num_inequalities() > 0) {
        const Vector slack = spec.ineq_matrix * unique->x + spec.ineq_offset;
        if (slack.minCoeff() < -equality_tolerance(spec.ineq_offset)) {
          out << "classification: Impossible\n";
          err << "impossible: the unique solution of C x + d = 0 violates A x + b >= 0\n";
          return kExitInfeasible;
        }
      }
      out << "classification: PointMass at x = ";
      print_vector(out, unique->x);
      out << "\n";
      return kExitOk;
    }
    out << "equality system: Infinite\n";
  }

  if (spec.num_inequalities() == 0) {
    out << "classification: "
        << (spec.num_equalities() > 0 ? "FullDimensional on the equality plane" : "Unconstrained")
        << "\n";
    return kExitOk;
  }

  const TransformedProblem t = build_transform(spec);
  const Matrix factor = factor_covariance(spec.covariance).factor;
  const FeasibilityResult feas = find_feasible_point(t.ineq_matrix * factor, t.ineq_offset);
  if (const auto* inf = std::get_if<Infeasible>(&feas)) {
    out << "classification: Impossible (phase-1 optimum z = " << inf->violation << ")\n";
    err << "impossible: inequality constraints admit no solution\n";
    return kExitInfeasible;
  }
  if (const auto* point = std::get_if<PointMass>(&feas)) {
    out << "classification: PointMass at x = ";
    print_vector(out, map_latent(t, factor * point->y));
    out << "\n";
    return kExitOk;
  }
  const auto& full = std::get<FullDimensional>(feas);
  out << "classification: FullDimensional (chebyshev radius " << full.chebyshev_radius
      << " in whitened units)\n";
  out << "start x = ";
  print_vector(out, map_latent(t, factor * full.start));
  out << "\n";
  return kExitOk;
}

int cmd_compare(const CompareArgs& args, std::ostream& out, std::ostream& err) {
  const ProblemFile problem = load_problem(args.problem);
  const ProblemSpec& spec = problem.spec;
  if (args.n < 2) throw Error(ErrorCode::InvalidProblem, "--n must be at least 2 to compare");
  if (args.oracle == "rejection" && spec.num_equalities() > 0) {
    throw Error(ErrorCode::InvalidProblem,
                "rejection oracle cannot handle equalities; use --oracle conditional");
  }
  if (args.oracle == "conditional" && spec.num_equalities() == 0) {
    throw Error(ErrorCode::InvalidProblem, "conditional oracle needs equality constraints");
  }

  RandomSource rng(args.seed);
  const SamplingOutcome outcome = sample_constrained(
      spec, args.n, rng, sampler_options(args.burn_in, args.thin, args.chains));
  out << "recipe: " << recipe_name(outcome.report.recipe) << "\n";
  out << "classification: " << outcome.report.classification << "\n";
  if (const auto* impossible = std::get_if<Impossible>(&outcome.result)) {
    err << "impossible: " << impossible->reason << "\n";
    return kExitInfeasible;
  }
  if (std::holds_alternative<PointMassAt>(outcome.result)) {
    throw Error(ErrorCode::DegenerateSamples, "problem is a point mass; nothing to compare");
  }
  const auto& draws = std::get<Samples>(outcome.result).draws;
  StatsOptions method_opts;
  method_opts.estimate_ess = !outcome.report.independent;
  const SampleStats method = sample_stats(draws, method_opts);

  RandomSource oracle_rng(args.seed, 1);
  const auto max_proposals = static_cast<std::size_t>(std::max(args.max_proposals, 1.0));
  RejectionReport oracle;
  if (args.oracle == "rejection") {
    oracle = RejectionSampler(spec).run_until(args.n, oracle_rng, max_proposals);
  } else {
    std::optional<InequalityFilter> filter;
    if (spec.num_inequalities() > 0) filter = InequalityFilter{spec.ineq_matrix, spec.ineq_offset};
    oracle = ConditionalPlaneSampler(spec).run_until(args.n, oracle_rng, filter, max_proposals);
  }
  out << "oracle: " << args.oracle << ", proposals " << oracle.proposals << ", accepted "
      << oracle.accepted << ", acceptance rate " << oracle.acceptance_rate << "\n";
  if (oracle.accepted < args.n) {
    err << "warning: oracle stopped at --max-proposals with " << oracle.accepted << " of "
        << args.n << " samples\n";
  }
  if (oracle.accepted < 2) {
    throw Error(ErrorCode::DegenerateSamples, "oracle accepted fewer than two samples");
  }
  StatsOptions oracle_opts;
  oracle_opts.estimate_ess = false;
  const SampleStats reference = sample_stats(oracle.samples, oracle_opts);

  const ComparisonReport cmp = compare_stats(method, reference, args.sigma);
  out << cmp.table();
  if (!args.json_out.empty()) {
    std::ofstream js(args.json_out);
    if (!js) throw Error(ErrorCode::InvalidProblem, "cannot write '" + args.json_out + "'");
    nlohmann::json doc = cmp.to_json();
    doc["recipe"] = std::string(recipe_name(outcome.report.recipe));
    doc["oracle"] = args.oracle;
    doc["oracle_proposals"] = oracle.proposals;
    doc["oracle_acceptance_rate"] = oracle.acceptance_rate;
    js << doc.dump(2) << "\n";
  }
  return cmp.all_pass ? kExitOk : kExitComparisonFailed;
}

int cmd_fixtures(const std::string& name, const std::string& dir, std::ostream& out) {
  if (name != "pentagon") throw Error(ErrorCode::InvalidProblem, "unknown fixture '" + name + "'");
  std::filesystem::create_directories(dir);
  for (auto which : {fixtures::PentagonCase::InequalityOnly, fixtures::PentagonCase::EqualityOnly,
                     fixtures::PentagonCase::Combined}) {
    const auto path =
        std::filesystem::path(dir) / (std::string(fixtures::case_name(which)) + ".json");
    save_problem(ProblemFile{fixtures::pentagon(which), fixtures::pentagon_transform()}, path);
    out << "wrote " << path.string() << "\n";
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rejection-free sampling of linearly constrained multivariate normals", "linmvn"};
  app.require_subcommand(1);

  SampleArgs sample;
  auto* sample_cmd = app.add_subcommand("sample", "Draw samples and write them as CSV");
  sample_cmd->add_option("--problem", sample.problem, "Problem JSON file")->required();
  sample_cmd->add_option("--n", sample.n, "Number of samples")->required()->check(CLI::PositiveNumber);
  sample_cmd->add_option("--seed", sample.seed, "Random seed")->required();
  sample_cmd->add_option("--burn-in", sample.burn_in, "Chain steps discarded before sampling");
  sample_cmd->add_option("--thin", sample.thin, "Keep every T-th chain state")
      ->check(CLI::PositiveNumber);
  sample_cmd->add_option("--chains", sample.chains, "Independent chains (seeded seed+index)")
      ->check(CLI::PositiveNumber);
  sample_cmd->add_option("--out", sample.out, "CSV output path, '-' for stdout");

  std::string check_problem;
  auto* check_cmd = app.add_subcommand("check", "Classify the constrained domain");
  check_cmd->add_option("--problem", check_problem, "Problem JSON file")->required();

  CompareArgs compare;
  auto* compare_cmd =
      app.add_subcommand("compare", "Compare sampler moments against an independent oracle");
  compare_cmd->add_option("--problem", compare.problem, "Problem JSON file")->required();
  compare_cmd->add_option("--n", compare.n, "Samples per method")->required();
  compare_cmd->add_option("--seed", compare.seed, "Random seed")->required();
  compare_cmd->add_option("--oracle", compare.oracle, "rejection | conditional")
      ->required()
      ->check(CLI::IsMember({"rejection", "conditional"}));
  compare_cmd->add_option("--sigma", compare.sigma, "Agreement threshold in standard errors");
  compare_cmd->add_option("--burn-in", compare.burn_in, "Chain steps discarded before sampling");
  compare_cmd->add_option("--thin", compare.thin, "Keep every T-th chain state")
      ->check(CLI::PositiveNumber);
  compare_cmd->add_option("--chains", compare.chains, "Independent chains")
      ->check(CLI::PositiveNumber);
  compare_cmd->add_option("--max-proposals", compare.max_proposals, "Oracle proposal budget");
  compare_cmd->add_option("--json", compare.json_out, "Also write the report as JSON");

  std::string fixture_name;
  std::string fixture_dir = ".";
  auto* fixtures_cmd = app.add_subcommand("fixtures", "Write built-in validation problems");
  fixtures_cmd->add_option("--name", fixture_name, "Fixture name (pentagon)")->required();
  fixtures_cmd->add_option("--out-dir", fixture_dir, "Output directory");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitMalformedInput;
  }

  try {
    if (sample_cmd->parsed()) return cmd_sample(sample, out, err);
    if (check_cmd->parsed()) return cmd_check(check_problem, out, err);
    if (compare_cmd->parsed()) return cmd_compare(compare, out, err);
    if (fixtures_cmd->parsed()) return cmd_fixtures(fixture_name, fixture_dir, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const nlohmann::json::exception& e) {
    err << "error: InvalidProblem: " << e.what() << "\n";
    return kExitMalformedInput;
  } catch (const std::logic_error& e) {
    err << "error: numerical failure: " << e.what() << "\n";
    return kExitNumericalFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitMalformedInput;
  }
  return kExitMalformedInput;
}

}  // namespace linmvn
