#pragma once

#include "linmvn/oracles.hpp"
#include "linmvn/transform.hpp"

#include <string_view>

namespace linmvn::fixtures {

/// Four-dimensional validation problem: a fixed normal, five inequalities
/// cutting out a thin region of probability ~6e-5, and two equalities whose
/// intersection is a plane. On that plane the inequalities bound an
/// irregular pentagon.
enum class PentagonCase { InequalityOnly, EqualityOnly, Combined };

std::string_view case_name(PentagonCase which);

ProblemSpec pentagon(PentagonCase which);

/// Coordinates in which the pentagon's equality plane is x'_3 = x'_4 = 0.
ValidationTransform pentagon_transform();

}  // namespace linmvn::fixtures
