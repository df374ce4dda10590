#pragma once

#include "homoglab/fem.hpp"

#include <string>
#include <vector>

namespace homoglab::sources {

/// f(x) = sign(x2) (1 + x1).
ScalarField standard();
ScalarField zero();
/// (1 + x1) on x2 < 0, zero above.
ScalarField minus_only();
/// (1 + x1) on x2 > 0, zero below.
ScalarField plus_only();
ScalarField one();

/// "standard", "zero", "minus-only", "plus-only", "one".
ScalarField by_name(const std::string& name);
std::vector<std::string> names();

}  // namespace homoglab::sources
