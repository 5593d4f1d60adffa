#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "brw/configuration.hpp"
#include "brw/genealogy.hpp"
#include "brw/spectral.hpp"

namespace brw {

/// 1 / (2 cos(pi / (2N + 2))): the top eigenvalue of C_N is 2cos(pi/(2N+2)),
/// the first of the cosine family solving the d = 1 recurrence.
double closed_form_lambda_c(IntervalRadius n);

struct AsymptoticRow {
  int n = 0;
  double lambda_c = 0.0;
  double scaled_gap = 0.0;
  double closed_form_lambda_c = 0.0;
};

struct LimitCandidate {
  std::string name;
  double value = 0.0;
  double relative_error = 0.0;  // |extrapolated - value| / value
};

/// Scaled gaps n^2 (2 lambda_c(n) - 1) on a list of radii with a
/// first-order Richardson extrapolation of the limit, compared against the
/// two constants the limit is quoted as.
struct AsymptoticReport {
  std::vector<AsymptoticRow> rows;
  /// |g(last) - g(previous)| / g(last)
  double relative_change = 0.0;
  double extrapolated_limit = 0.0;
  std::vector<LimitCandidate> candidates;
  /// Name of the candidate closest to the extrapolated limit.
  std::string supported;
  /// max over rows of |lambda_c - closed form|
  double closed_form_max_error = 0.0;
};

/// `radii` must be strictly increasing with at least two entries.
AsymptoticReport asymptotic_report(std::span<const int> radii,
                                   double tol = kDefaultTolerance, unsigned threads = 0);

struct CouplingConfig {
  /// (lambda1, lambda2) with lambda1 <= lambda2; genealogies are built at lambda2.
  std::vector<std::pair<double, double>> lambda_pairs;
  /// (n1, n2) with n1 < n2.
  std::vector<std::pair<int, int>> n_pairs;
  std::uint64_t genealogies = 100;
  double t_max = 5.0;
  std::uint64_t pop_cap = 1'000'000;
  std::uint64_t seed = 0;
  Configuration initial = Configuration::single(0);
  unsigned threads = 0;
};

struct CouplingViolation {
  std::string check;  // e.g. "thin 0.55<=0.65" or "restrict 2<=4 @0.65"
  std::uint64_t genealogy = 0;
  DominationViolation at;
};

struct CouplingReport {
  std::uint64_t genealogies = 0;
  std::uint64_t checks = 0;
  std::uint64_t events_checked = 0;
  std::uint64_t violations = 0;
  std::uint64_t truncated_genealogies = 0;
  std::optional<CouplingViolation> first_violation;

  bool all_dominated() const noexcept { return violations == 0; }
};

/// For each lambda pair and genealogy index i, builds a genealogy at lambda2
/// from trial_engine(seed, pair_index * genealogies + i) and checks, at every
/// event time and site:
///   thinned(lambda1) <= full;
///   restrict(n1) <= restrict(n2) <= full, at both lambda2 and lambda1;
///   thinned restrict(n) <= restrict(n) for every n in the pairs.
CouplingReport coupling_check(const CouplingConfig& config);

}  // namespace brw
