#pragma once

#include <string_view>

#include "tractorlab/poly.hpp"

namespace tractorlab {

/// Parses integer-coefficient expressions in x1..xn with +, -, *, ^,
/// parentheses and the sugar |x|^2 = x1^2 + ... + xn^2.
/// Throws SchemaError on malformed input.
Poly parse_poly(std::string_view text, int nvars);

}  // namespace tractorlab
