#pragma once
#include <stdexcept>
#include <string>
#include <limits>

namespace henon {

// Domain error with a stable machine-readable code. The CLI turns these
// into JSON records on stderr; tests match on `code`.
class Error : public std::runtime_error {
public:
  Error(std::string code, std::string message,
        double value = std::numeric_limits<double>::quiet_NaN(),
        long index = -1)
      : std::runtime_error(message), code(std::move(code)),
        value(value), index(index) {}

  std::string code;
  double value;  // payload, e.g. the last Green estimate
  long index;    // payload, e.g. the orbit step at failure
};

}  // namespace henon
