#pragma once

#include <vector>

#include "shiftlab/rational.hpp"

namespace shiftlab {

using RationalMatrix = std::vector<std::vector<Rational>>;

// Exact positive semidefiniteness of a symmetric rational matrix by
// symmetric elimination with diagonal pivoting.
bool is_psd(RationalMatrix a);

// Floating-point test: smallest eigenvalue >= -tol * max(1, |largest|).
bool is_psd(const std::vector<std::vector<double>>& a, double tol);

}  // namespace shiftlab
