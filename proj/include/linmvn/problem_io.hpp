#pragma once

#include "linmvn/oracles.hpp"
#include "linmvn/transform.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

#include "json.hpp"

namespace linmvn {

/// JSON problem document:
///   {"n": 4, "mu": [...], "sigma": [[...], ...],
///    "A": [[...]], "b": [...],          optional, together
///    "C": [[...]], "d": [...],          optional, together
///    "validation_transform": {"T": [[...]], "offset": [...]}}   optional
/// Matrices are arrays of rows. Malformed documents throw
/// Error(InvalidProblem) naming the offending field.
struct ProblemFile {
  ProblemSpec spec;
  std::optional<ValidationTransform> validation;
};

ProblemFile parse_problem(const nlohmann::json& doc);
ProblemFile load_problem(const std::filesystem::path& path);

nlohmann::json problem_to_json(const ProblemFile& problem);
void save_problem(const ProblemFile& problem, const std::filesystem::path& path);

/// CSV with header x1..xn and 17 significant digits per value.
void write_samples_csv(std::ostream& os, const std::vector<Vector>& samples, Eigen::Index dim);

}  // namespace linmvn
