#pragma once

#include <stdexcept>
#include <string>

namespace latpp {

/// Malformed text record (process, field sample, ...).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Exact enumeration refused: 2^(w+lag) would exceed the cost guard.
class EnumerationLimit : public std::runtime_error {
 public:
  explicit EnumerationLimit(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace latpp
