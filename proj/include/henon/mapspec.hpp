#pragma once
#include <string>

#include "henon/map.hpp"

namespace henon {

// Parse a map specification like
//   p = z^2 - 6; a = 0.5
// Coefficients are decimal or scientific literals; complex values are
// written re+imi (e.g. 0.5-0.25i, 2i, i); complex coefficients inside the
// polynomial go in parentheses: p = z^2 + (1+2i)*z - 6.
// Throws Error("map-parse", ...) on malformed input; the map constructor
// rejects a = 0 and degree < 2.
HenonMapD parse_map_spec(const std::string& text);

// complex literal alone: 1.5-0.25i, 2i, i, 3e-2
cxd parse_complex_literal(const std::string& text);

}  // namespace henon
