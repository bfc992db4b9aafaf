#pragma once

#include <string_view>

#include "wbmld/polynomial.hpp"

namespace wbmld {

// Grammar: sums of products of powers; numbers may be p/q; '*' may be omitted.
// Variables: x1..xN, x_1..x_N, X1..XN, and the aliases x, y, z.
Polynomial parse_polynomial(std::string_view text, int nvars = 3);

// Index of a variable name, or -1.
int variable_index(std::string_view name, int nvars);

}  // namespace wbmld
