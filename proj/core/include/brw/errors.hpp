#pragma once

#include <stdexcept>
#include <string>

namespace brw {

/// Raised when caller-supplied parameters violate a documented range.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Birth-rate ordering violated in a thinning request.
class RateOrderViolation : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// A genealogy was queried past the time at which it was truncated.
class QueryBeyondTruncation : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// A numerical method failed to deliver its contract.
class NumericalError : public std::runtime_error {
 public:
  enum class Kind { ToleranceNotReached, MethodDisagreement };

  NumericalError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace brw
