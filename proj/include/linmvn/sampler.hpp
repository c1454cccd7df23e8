#pragma once

#include "linmvn/core.hpp"
#include "linmvn/feasibility.hpp"
#include "linmvn/liness.hpp"
#include "linmvn/transform.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace linmvn {

/// Which end-to-end procedure handled the problem.
enum class Recipe {
  Unconstrained,   // no constraints: x = y + mu
  EqualityOnly,    // exact draws on the equality plane
  InequalityOnly,  // phase-1 LP then elliptical slice chain, x = y + mu
  Combined,        // equality transform, phase-1 LP on (H, k), chain, x = F y + g
};

std::string_view recipe_name(Recipe recipe);

struct Impossible {
  std::string reason;
};
struct PointMassAt {
  Vector x;
};
struct Samples {
  std::vector<Vector> draws;
};

struct RunReport {
  Recipe recipe = Recipe::Unconstrained;
  std::string classification;  // e.g. "FullDimensional(radius=0.12)"
  std::size_t chain_length = 0;  // total kernel steps, 0 for exact draws
  bool independent = true;       // draws are iid (no Markov chain)
  double seconds = 0.0;
};

struct SamplingOutcome {
  std::variant<Impossible, PointMassAt, Samples> result;
  RunReport report;
};

struct SamplerOptions {
  ChainOptions chain;
  /// Chains > 1 split N across independent chains seeded seed + index and run
  /// on separate threads; samples are concatenated in chain order.
  std::size_t chains = 1;
  FeasibilityOptions feasibility;
};

/// Dispatches on (equalities present) x (inequalities present) and returns N
/// samples of x, a point mass, or the reason the problem has no solution.
/// Errors from the transform, feasibility and chain stages propagate.
SamplingOutcome sample_constrained(const ProblemSpec& spec, std::size_t n, RandomSource& rng,
                                   const SamplerOptions& options = {});

}  // namespace linmvn
