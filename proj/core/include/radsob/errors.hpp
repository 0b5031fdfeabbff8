#pragma once

#include <stdexcept>
#include <string>

namespace radsob {

// Malformed textual or structured input.
class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Value outside the mathematical domain of an operation.
class DomainError : public std::runtime_error {
public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// A theorem hypothesis fails for the given data; carries the violated
// inequality so callers can report it instead of silently returning an
// empty range.
class HypothesisError : public DomainError {
public:
  HypothesisError(const std::string& inequality, const std::string& detail)
      : DomainError(inequality + ": " + detail), inequality_(inequality) {}
  const std::string& inequality() const { return inequality_; }

private:
  std::string inequality_;
};

// An iterative routine exhausted its budget without meeting its tolerance.
class ConvergenceError : public std::runtime_error {
public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace radsob
