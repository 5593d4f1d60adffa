#pragma once

#include <cmath>
#include <string>

#include "brw/errors.hpp"

namespace brw {

/// Birth rate per neighbour direction. Zero is admitted as the pure-death
/// limit; negative or non-finite values are rejected.
class BirthRate {
 public:
  explicit BirthRate(double value) : value_(value) {
    if (!std::isfinite(value) || value < 0.0) {
      throw InvalidArgument("birth rate must be finite and >= 0, got " +
                            std::to_string(value));
    }
  }

  double value() const noexcept { return value_; }

  friend bool operator==(BirthRate, BirthRate) = default;
  friend auto operator<=>(BirthRate, BirthRate) = default;

 private:
  double value_;
};

/// Radius N of the habitat {-N, ..., N}; always >= 1.
class IntervalRadius {
 public:
  explicit IntervalRadius(long long n) : n_(static_cast<int>(n)) {
    if (n < 1 || n > 100'000'000) {
      throw InvalidArgument("interval radius must be in [1, 1e8], got " +
                            std::to_string(n));
    }
  }

  int value() const noexcept { return n_; }
  /// Number of types 0..N in the distance-from-origin representation.
  int types() const noexcept { return n_ + 1; }
  bool contains(long long site) const noexcept {
    return site >= -n_ && site <= n_;
  }

  friend bool operator==(IntervalRadius, IntervalRadius) = default;
  friend auto operator<=>(IntervalRadius, IntervalRadius) = default;

 private:
  int n_;
};

}  // namespace brw
