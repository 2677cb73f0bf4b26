#pragma once

#include <optional>
#include <vector>

#include "qgrade/rational.hpp"

namespace qgrade {

/// Finds x >= 0 with M x = b by the two-phase simplex method (phase one
/// only) in exact arithmetic with Bland's anti-cycling rule. Returns a basic
/// feasible solution or nullopt when the system is infeasible.
std::optional<std::vector<Rational>> find_nonnegative_solution(const RationalMatrix &m, const RationalVector &b);

} // namespace qgrade
