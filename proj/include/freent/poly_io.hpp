#pragma once

// Text round-trip for NCPoly.  A term is `coeff*word` with letters joined by
// dots, e.g. `(-0.5+1i)*x1.x2.y3`; the unit word prints as `1`; terms are
// joined by ` + `.  The parser is whitespace-tolerant.

#include <string>

#include "freent/ncpoly.hpp"

namespace freent {

std::string to_string(const Word& w);
std::string to_string(const NCPoly& p);
std::string to_string(const TensorPoly& t);

// Throws std::invalid_argument with position information on malformed input.
NCPoly parse_poly(const std::string& text);

}  // namespace freent
