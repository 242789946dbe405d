#pragma once

#include <stdexcept>
#include <string>

namespace lambdag {

// Extra samples fell off the fitted polynomial, or a cross-check between two
// independently computed values failed.
struct ConsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A correlator was requested for (g, n) with 2g - 2 + n <= 0.
struct UnstableInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Weighting modulus r < 1.
struct InvalidModulus : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operation not available for the requested target geometry.
struct UnsupportedTarget : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operation not available at the requested genus.
struct UnsupportedGenus : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Givental input data violated a structural requirement.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Cache file could not be parsed; line_no is 1-based.
struct CacheParseError : std::runtime_error {
  CacheParseError(const std::string& what, int line_no)
      : std::runtime_error(what), line_no(line_no) {}
  int line_no;
};

}  // namespace lambdag
