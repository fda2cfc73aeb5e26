#pragma once

#include <stdexcept>
#include <string>

namespace pureg {

// Problem with user-supplied data: malformed files, dimension mismatches,
// non-finite values, degenerate inputs.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// A solve or other floating-point computation failed beyond recovery.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pureg
