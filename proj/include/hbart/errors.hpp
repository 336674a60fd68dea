#pragma once

#include <stdexcept>
#include <string>

namespace hbart {

// Bad or malformed input data (missing file, missing cells, bad schema).
// The CLI maps this to exit code 2.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numeric failure or broken internal invariant (non-finite values,
// non-positive variance cache, incoherent caches). CLI exit code 3.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace hbart
