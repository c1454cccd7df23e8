#include "linmvn/sampler.hpp"

#include "linmvn/error.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <sstream>
#include <thread>

namespace linmvn {

std::string_view recipe_name(Recipe recipe) {
  switch (recipe) {
    case Recipe::Unconstrained: return "unconstrained";
    case Recipe::EqualityOnly: return "equality-only";
    case Recipe::InequalityOnly: return "inequality-only";
    case Recipe::Combined: return "equality-and-inequality";
  }
  return "unknown";
}

namespace {

std::vector<Vector> exact_draws(const TransformedProblem& t, const CovarianceFactor& factor,
                                std::size_t n, RandomSource& rng) {
  std::vector<Vector> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(map_latent(t, sample_mvn_zero(factor, rng)));
  return out;
}

std::vector<Vector> chain_draws(const TransformedProblem& t, const CovarianceFactor& factor,
                                const Vector& y0, std::size_t n, RandomSource& rng,
                                const SamplerOptions& options) {
  const std::size_t chains = std::max<std::size_t>(1, std::min(options.chains, n));
  std::vector<std::vector<Vector>> latent(chains);
  if (chains == 1) {
    latent[0] = run_chain(t, factor, y0, n, rng, options.chain);
  } else {
    std::vector<std::exception_ptr> failures(chains);
    std::vector<std::thread> workers;
    for (std::size_t c = 0; c < chains; ++c) {
      const std::size_t length = n / chains + (c < n % chains ? 1 : 0);
      workers.emplace_back([&, c, length] {
        try {
          RandomSource chain_rng(rng.seed() + c);
          latent[c] = run_chain(t, factor, y0, length, chain_rng, options.chain);
        } catch (...) {
          failures[c] = std::current_exception();
        }
      });
    }
    for (auto& w : workers) w.join();
    for (auto& f : failures) {
      if (f) std::rethrow_exception(f);
    }
  }

  std::vector<Vector> out;
  out.reserve(n);
  for (auto& chain : latent) {
    for (auto& y : chain) out.push_back(map_latent(t, y));
  }
  return out;
}

std::string describe(const FeasibilityResult& feas) {
  std::ostringstream os;
  os.precision(6);
  if (const auto* inf = std::get_if<Infeasible>(&feas)) {
    os << "Infeasible(z=" << inf->violation << ")";
  } else if (std::holds_alternative<PointMass>(feas)) {
    os << "PointMass";
  } else {
    os << "FullDimensional(chebyshev_radius=" << std::get<FullDimensional>(feas).chebyshev_radius
       << ")";
  }
  return os.str();
}

}  // namespace

SamplingOutcome sample_constrained(const ProblemSpec& spec, std::size_t n, RandomSource& rng,
                                   const SamplerOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  validate(spec);
  if (n < 1) throw Error(ErrorCode::InvalidProblem, "sample count must be at least 1");

  const bool has_eq = spec.num_equalities() > 0;
  const bool has_ineq = spec.num_inequalities() > 0;

  SamplingOutcome outcome;
  RunReport& report = outcome.report;
  report.recipe = has_eq ? (has_ineq ? Recipe::Combined : Recipe::EqualityOnly)
                         : (has_ineq ? Recipe::InequalityOnly : Recipe::Unconstrained);
  auto finish = [&]() -> SamplingOutcome {
    report.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return std::move(outcome);
  };

  if (has_eq) {
    const EqualityClass cls = classify_equality_system(spec.eq_matrix, spec.eq_offset);
    if (std::holds_alternative<NoSolution>(cls)) {
      report.classification = "NoSolution";
      outcome.result = Impossible{"equality system C x + d = 0 has zero solutions"};
      return finish();
    }
    if (const auto* unique = std::get_if<UniqueSolution>(&cls)) {
      report.classification = "Unique";
      if (has_ineq) {
        const Vector slack = spec.ineq_matrix * unique->x + spec.ineq_offset;
        if (slack.minCoeff() < -equality_tolerance(spec.ineq_offset)) {
          outcome.result =
              Impossible{"the unique solution of C x + d = 0 violates A x + b >= 0"};
          return finish();
        }
      }
      outcome.result = PointMassAt{unique->x};
      return finish();
    }
    report.classification = "Infinite";
  }

  const CovarianceFactor factor = factor_covariance(spec.covariance);
  const TransformedProblem t = build_transform(spec);

  if (!has_ineq) {
    if (report.classification.empty()) report.classification = "Unconstrained";
    outcome.result = Samples{exact_draws(t, factor, n, rng)};
    return finish();
  }

  // Feasibility is decided in whitened coordinates y = L u, which also keeps
  // the start inside the support of N(0, S) when S is singular.
  const FeasibilityResult feas =
      find_feasible_point(t.ineq_matrix * factor.factor, t.ineq_offset, options.feasibility);
  report.classification = has_eq ? "Infinite; " + describe(feas) : describe(feas);
  if (const auto* inf = std::get_if<Infeasible>(&feas)) {
    std::ostringstream reason;
    reason << "inequality constraints admit no solution (phase-1 optimum z = " << inf->violation
           << ")";
    outcome.result = Impossible{reason.str()};
    return finish();
  }
  if (const auto* point = std::get_if<PointMass>(&feas)) {
    outcome.result = PointMassAt{map_latent(t, factor.factor * point->y)};
    return finish();
  }

  const auto& start = std::get<FullDimensional>(feas);
  report.independent = false;
  const std::size_t thin = std::max<std::size_t>(options.chain.thin, 1);
  const std::size_t chains = std::max<std::size_t>(1, std::min(options.chains, n));
  report.chain_length = n * thin + chains * options.chain.burn_in;
  outcome.result = Samples{chain_draws(t, factor, factor.factor * start.start, n, rng, options)};
  return finish();
}

}  // namespace linmvn
