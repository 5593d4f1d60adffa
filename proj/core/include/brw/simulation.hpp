#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "brw/configuration.hpp"
#include "brw/model.hpp"
#include "brw/rng.hpp"

namespace brw {

struct SimParams {
  BirthRate lambda{0.0};
  /// Restricting interval; std::nullopt simulates the walk on all of Z.
  std::optional<IntervalRadius> n;
  Configuration initial;
  double t_max = 100.0;
  /// Budget on executed events (Gillespie) or recorded individuals
  /// (genealogy mode).
  std::uint64_t pop_cap = 1'000'000;
  std::uint64_t seed = 0;

  bool restricted() const noexcept { return n.has_value(); }
  /// Throws InvalidArgument on t_max <= 0, pop_cap == 0, or an initial
  /// configuration outside the restricting interval.
  void validate() const;
};

enum class Verdict { Extinct, AliveAtHorizon, CapReached };

struct TrialOutcome {
  Verdict verdict = Verdict::Extinct;
  /// Set iff verdict == Extinct.
  std::optional<double> extinction_time;
  Count final_total = 0;
  std::uint64_t events_used = 0;
  /// Time at which the run stopped (extinction, t_max, or cap).
  double end_time = 0.0;

  bool survived() const noexcept { return verdict != Verdict::Extinct; }
};

struct Trajectory {
  TrialOutcome outcome;
  Configuration final_state;
};

/// Called after every event with the site that changed and its new count.
using EventObserver = std::function<void(double time, Site site, Count count)>;

/// Aggregate-rate Gillespie run. Births that would cross the boundary of
/// the restricting interval are suppressed (their rate is removed).
Trajectory run_trajectory(const SimParams& params, Engine& rng,
                          const EventObserver& observer = {});

/// Single run with the generator derived from (params.seed, 0).
Trajectory run_trajectory(const SimParams& params);

/// Configurations at the requested (non-decreasing) times, each <= t_max.
/// Times past the stopping time of a run that ended early repeat the final
/// state; the outcome tells the caller why it stopped.
std::pair<TrialOutcome, std::vector<Configuration>> sample_trajectory(
    const SimParams& params, std::span<const double> times, Engine& rng);

struct SurvivalEstimate {
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t trials = 0;
  /// Fraction of trials stopped by pop_cap before the horizon. Those trials
  /// are counted as survivors.
  double censored_fraction = 0.0;
  std::uint64_t seed = 0;
};

/// Wilson score interval at 95%.
std::pair<double, double> wilson_interval(std::uint64_t successes,
                                          std::uint64_t trials);

SurvivalEstimate summarize_survival(std::uint64_t survivors, std::uint64_t capped,
                                    std::uint64_t trials, std::uint64_t seed);

/// Trial i uses trial_engine(params.seed, i); the result is identical for
/// every thread count.
SurvivalEstimate estimate_survival(const SimParams& params, std::uint64_t trials,
                                   unsigned threads = 0);

struct MeanCountsEstimate {
  std::vector<double> mean;       // per type 0..N
  std::vector<double> std_error;  // per type 0..N
  std::uint64_t trials = 0;
};

/// Monte Carlo mean of type counts at time t from one individual at site
/// +initial_type, restricted to {-N..N}.
MeanCountsEstimate empirical_mean_counts(IntervalRadius n, BirthRate lambda, double t,
                                         int initial_type, std::uint64_t trials,
                                         std::uint64_t seed = 0, unsigned threads = 0);

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
};

/// Monte Carlo mean of the total population at `params.t_max`. Trials that
/// hit pop_cap are reported through `capped` and bias the mean low.
MeanEstimate empirical_mean_total(const SimParams& params, std::uint64_t trials,
                                  unsigned threads = 0, std::uint64_t* capped = nullptr);

}  // namespace brw
