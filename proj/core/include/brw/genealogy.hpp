#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "brw/configuration.hpp"
#include "brw/model.hpp"
#include "brw/rng.hpp"
#include "brw/simulation.hpp"

namespace brw {

/// One individual of the unrestricted walk. Roots have no parent and no
/// birth mark; every child carries an independent U(0,1) mark used to thin
/// the birth streams.
struct Individual {
  std::uint64_t id = 0;
  std::optional<std::uint64_t> parent;
  Site site = 0;
  double birth_time = 0.0;
  double death_time = 0.0;
  std::optional<double> birth_mark;

  bool alive_at(double t) const noexcept { return birth_time <= t && t < death_time; }
  friend bool operator==(const Individual&, const Individual&) = default;
};

/// Full birth tree of one realisation. Records are sorted by birth time and
/// id equals the record's position, so parents always precede children.
struct Genealogy {
  BirthRate lambda{0.0};
  double t_max = 0.0;
  std::vector<Individual> individuals;
  /// Set when pop_cap stopped construction before t_max.
  bool truncated = false;
  /// Every individual alive before this time is recorded exactly.
  double complete_until = 0.0;

  /// Throws QueryBeyondTruncation if t is outside the recorded window.
  void check_query(double t) const;
};

/// Membership mask over a genealogy's records; true = present in the
/// derived process.
using Membership = std::vector<bool>;

/// Builds the unrestricted genealogy from per-individual exponential
/// lifetimes and two rate-lambda Poisson birth streams (left and right).
/// params.n must be empty; pop_cap bounds the number of records.
Genealogy build_genealogy(const SimParams& params, Engine& rng);
Genealogy build_genealogy(const SimParams& params);

/// Records belonging to the process restricted to {-N..N}: a root inside the
/// interval, or a child born inside whose parent belongs.
Membership restricted_membership(const Genealogy& g, IntervalRadius n);

/// Records kept when thinning the birth streams to rate lambda1: a child is
/// kept iff its mark is below lambda1 / lambda and its parent is kept.
Membership thinned_membership(const Genealogy& g, double lambda1);

Membership full_membership(const Genealogy& g);

/// Sitewise counts of the members alive at each query time.
std::vector<Configuration> counts_at(const Genealogy& g, const Membership& members,
                                     std::span<const double> times);

/// Counts of the N-restricted process at each query time.
std::vector<Configuration> restrict_genealogy(const Genealogy& g, IntervalRadius n,
                                              std::span<const double> times);

/// The rate-lambda1 genealogy obtained by thinning; records keep their ids
/// so the result can be compared pathwise with the source.
Genealogy thin_genealogy(const Genealogy& g, double lambda1);

/// Birth and death times inside the recorded window, sorted.
std::vector<double> event_times(const Genealogy& g);

struct DominationViolation {
  double time = 0.0;
  Site site = 0;
  Count lower = 0;
  Count upper = 0;
};

struct DominationReport {
  std::uint64_t events_checked = 0;
  std::optional<DominationViolation> violation;

  bool dominated() const noexcept { return !violation.has_value(); }
};

/// Sweeps every birth/death event in the recorded window and checks
/// count(lower, site, t) <= count(upper, site, t) at every site touched.
DominationReport check_domination(const Genealogy& g, const Membership& lower,
                                  const Membership& upper);

}  // namespace brw
