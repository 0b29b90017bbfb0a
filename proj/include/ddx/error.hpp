#pragma once

#include <stdexcept>
#include <string>

namespace ddx {

// Base error for every rejection in the library: validation failures,
// dimension mismatches, malformed inputs, numerical break-downs.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// File-level failures (missing file, unreadable, write failure).
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace ddx
