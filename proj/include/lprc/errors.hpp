#pragma once

#include <stdexcept>
#include <string>

namespace lprc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document. `location` names the offending field or line.
class ParseError : public Error {
 public:
  ParseError(std::string location, const std::string& what)
      : Error(location.empty() ? what : location + ": " + what),
        location_(std::move(location)) {}
  const std::string& location() const noexcept { return location_; }

 private:
  std::string location_;
};

/// A caller broke an operation's precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A configured search or enumeration limit was hit.
class LimitExceeded : public Error {
 public:
  using Error::Error;
};

/// The LP engine could not certify a result at the requested tolerance,
/// or a pricing vertex came back fractional.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A plan produced by a rounding algorithm failed its audit. Always a bug.
class AuditFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace lprc
