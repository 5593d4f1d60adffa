#include "brw/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "brw/parallel.hpp"

namespace brw {

namespace {

constexpr double kWilsonZ = 1.959963984540054;

// Dense per-site counts over a window [lo_, lo_ + size). In restricted mode
// the window is exactly {-N..N}; otherwise it grows on demand.
class Lattice {
 public:
  explicit Lattice(const SimParams& p)
      : lambda_(p.lambda.value()), restricted_(p.restricted()),
        radius_(p.restricted() ? p.n->value() : 0) {
    if (restricted_) {
      lo_ = -radius_;
      counts_.assign(static_cast<std::size_t>(2 * radius_ + 1), 0);
    } else {
      Site first = p.initial.empty() ? 0 : p.initial.sites().begin()->first;
      Site last = p.initial.empty() ? 0 : p.initial.sites().rbegin()->first;
      lo_ = first - kPad;
      counts_.assign(static_cast<std::size_t>(last - first + 1 + 2 * kPad), 0);
    }
    for (const auto& [site, c] : p.initial.sites()) {
      counts_[index(site)] = c;
      total_ += c;
    }
  }

  Count total() const noexcept { return total_; }

  double total_rate() const noexcept {
    double rate = static_cast<double>(total_) * (1.0 + 2.0 * lambda_);
    if (restricted_) {
      rate -= lambda_ * static_cast<double>(counts_.front() + counts_.back());
    }
    return rate;
  }

  struct Change {
    Site site;
    Count count;
  };

  // Applies the event located at u in [0, total_rate()).
  Change apply(double u) {
    double r = u;
    std::size_t last_occupied = 0;
    for (std::size_t i = 0; i < counts_.size(); ++i) {
      const Count c = counts_[i];
      if (c == 0) continue;
      last_occupied = i;
      const Site site = lo_ + static_cast<Site>(i);
      const bool left_ok = !restricted_ || site - 1 >= -radius_;
      const bool right_ok = !restricted_ || site + 1 <= radius_;
      const double per = 1.0 + lambda_ * (static_cast<int>(left_ok) + static_cast<int>(right_ok));
      const double w = static_cast<double>(c) * per;
      if (r < w) {
        double v = r / static_cast<double>(c);
        if (v < 1.0) return kill(site);
        v -= 1.0;
        if (left_ok && v < lambda_) return birth(site - 1);
        if (right_ok) return birth(site + 1);
        return birth(site - 1);
      }
      r -= w;
    }
    // u landed on the rounding slack past the last weight.
    return kill(lo_ + static_cast<Site>(last_occupied));
  }

  Configuration snapshot() const {
    Configuration c;
    for (std::size_t i = 0; i < counts_.size(); ++i) {
      if (counts_[i] != 0) c.add(lo_ + static_cast<Site>(i), counts_[i]);
    }
    return c;
  }

 private:
  static constexpr Site kPad = 16;

  std::size_t index(Site site) const { return static_cast<std::size_t>(site - lo_); }

  Change kill(Site site) {
    Count& c = counts_[index(site)];
    --c;
    --total_;
    return {site, c};
  }

  Change birth(Site site) {
    if (site < lo_) {
      Site grow = std::max<Site>(kPad, static_cast<Site>(counts_.size()));
      counts_.insert(counts_.begin(), static_cast<std::size_t>(grow), 0);
      lo_ -= grow;
    } else if (index(site) >= counts_.size()) {
      counts_.resize(counts_.size() + std::max<std::size_t>(kPad, counts_.size()), 0);
    }
    Count& c = counts_[index(site)];
    ++c;
    ++total_;
    return {site, c};
  }

  double lambda_;
  bool restricted_;
  int radius_;
  Site lo_ = 0;
  std::vector<Count> counts_;
  Count total_ = 0;
};

// Runs one trajectory. on_advance(t) fires before the state jumps at time t
// (and with t_max, or the stopping time, at the end); on_event fires after.
template <typename OnAdvance, typename OnEvent>
TrialOutcome run_impl(const SimParams& p, Engine& rng, Lattice& lattice,
                      OnAdvance&& on_advance, OnEvent&& on_event) {
  std::exponential_distribution<double> unit_exp(1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  TrialOutcome out;
  double t = 0.0;
  while (true) {
    if (lattice.total() == 0) {
      out.verdict = Verdict::Extinct;
      out.extinction_time = t;
      out.end_time = t;
      break;
    }
    const double rate = lattice.total_rate();
    const double next = t + unit_exp(rng) / rate;
    if (next > p.t_max) {
      out.verdict = Verdict::AliveAtHorizon;
      out.end_time = p.t_max;
      break;
    }
    if (out.events_used >= p.pop_cap) {
      out.verdict = Verdict::CapReached;
      out.end_time = t;
      break;
    }
    on_advance(next);
    t = next;
    auto change = lattice.apply(unit(rng) * rate);
    ++out.events_used;
    on_event(t, change.site, change.count);
  }
  out.final_total = lattice.total();
  return out;
}

}  // namespace

void SimParams::validate() const {
  if (!(t_max > 0.0)) throw InvalidArgument("t_max must be > 0");
  if (pop_cap == 0) throw InvalidArgument("pop_cap must be >= 1");
  if (n && !initial.within(*n)) {
    throw InvalidArgument("initial configuration lies outside {-N..N} for N = " +
                          std::to_string(n->value()));
  }
}

Trajectory run_trajectory(const SimParams& params, Engine& rng,
                          const EventObserver& observer) {
  params.validate();
  Lattice lattice(params);
  auto outcome = run_impl(
      params, rng, lattice, [](double) {},
      [&](double t, Site s, Count c) {
        if (observer) observer(t, s, c);
      });
  return {outcome, lattice.snapshot()};
}

Trajectory run_trajectory(const SimParams& params) {
  Engine rng = trial_engine(params.seed, 0);
  return run_trajectory(params, rng);
}

std::pair<TrialOutcome, std::vector<Configuration>> sample_trajectory(
    const SimParams& params, std::span<const double> times, Engine& rng) {
  params.validate();
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0 || times[i] > params.t_max || (i > 0 && times[i] < times[i - 1])) {
      throw InvalidArgument("sample times must be non-decreasing within [0, t_max]");
    }
  }
  Lattice lattice(params);
  std::vector<Configuration> samples;
  samples.reserve(times.size());
  auto record_before = [&](double t) {
    while (samples.size() < times.size() && times[samples.size()] < t) {
      samples.push_back(lattice.snapshot());
    }
  };
  auto outcome = run_impl(params, rng, lattice, record_before, [](double, Site, Count) {});
  while (samples.size() < times.size()) samples.push_back(lattice.snapshot());
  return {outcome, std::move(samples)};
}

std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = kWilsonZ * kWilsonZ;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = kWilsonZ * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  double lo = std::max(0.0, centre - half);
  double hi = std::min(1.0, centre + half);
  // Keep the point estimate inside the interval despite rounding at p = 0, 1.
  return {std::min(lo, p), std::max(hi, p)};
}

SurvivalEstimate summarize_survival(std::uint64_t survivors, std::uint64_t capped,
                                    std::uint64_t trials, std::uint64_t seed) {
  if (trials == 0) throw InvalidArgument("trials must be >= 1");
  SurvivalEstimate est;
  est.trials = trials;
  est.seed = seed;
  est.p_hat = static_cast<double>(survivors) / static_cast<double>(trials);
  std::tie(est.ci_low, est.ci_high) = wilson_interval(survivors, trials);
  est.censored_fraction = static_cast<double>(capped) / static_cast<double>(trials);
  return est;
}

SurvivalEstimate estimate_survival(const SimParams& params, std::uint64_t trials,
                                   unsigned threads) {
  if (trials == 0) throw InvalidArgument("trials must be >= 1");
  params.validate();
  std::vector<Verdict> verdicts(trials);
  parallel_for(trials, threads, [&](std::size_t i) {
    Engine rng = trial_engine(params.seed, i);
    Lattice lattice(params);
    verdicts[i] = run_impl(params, rng, lattice, [](double) {}, [](double, Site, Count) {}).verdict;
  });
  std::uint64_t survivors = 0;
  std::uint64_t capped = 0;
  for (Verdict v : verdicts) {
    survivors += v != Verdict::Extinct;
    capped += v == Verdict::CapReached;
  }
  return summarize_survival(survivors, capped, trials, params.seed);
}

MeanCountsEstimate empirical_mean_counts(IntervalRadius n, BirthRate lambda, double t,
                                         int initial_type, std::uint64_t trials,
                                         std::uint64_t seed, unsigned threads) {
  if (trials == 0) throw InvalidArgument("trials must be >= 1");
  if (initial_type < 0 || initial_type > n.value()) {
    throw InvalidArgument("initial type outside 0..N");
  }
  if (!(t >= 0.0)) throw InvalidArgument("time must be >= 0");
  const int types = n.types();
  MeanCountsEstimate est;
  est.trials = trials;
  est.mean.assign(types, 0.0);
  est.std_error.assign(types, 0.0);
  if (t == 0.0) {
    est.mean[initial_type] = 1.0;
    return est;
  }

  SimParams p;
  p.lambda = lambda;
  p.n = n;
  p.initial = Configuration::single(initial_type);
  p.t_max = t;
  p.pop_cap = std::numeric_limits<std::uint64_t>::max();
  p.seed = seed;

  std::vector<Count> per_trial(static_cast<std::size_t>(trials) * types, 0);
  parallel_for(trials, threads, [&](std::size_t i) {
    Engine rng = trial_engine(seed, i);
    Lattice lattice(p);
    run_impl(p, rng, lattice, [](double) {}, [](double, Site, Count) {});
    const Configuration final_state = lattice.snapshot();
    for (const auto& [site, c] : final_state.sites()) {
      per_trial[i * types + static_cast<std::size_t>(site < 0 ? -site : site)] += c;
    }
  });

  const double m = static_cast<double>(trials);
  for (int k = 0; k < types; ++k) {
    double sum = 0.0;
    for (std::uint64_t i = 0; i < trials; ++i) sum += static_cast<double>(per_trial[i * types + k]);
    const double mean = sum / m;
    double ss = 0.0;
    for (std::uint64_t i = 0; i < trials; ++i) {
      double d = static_cast<double>(per_trial[i * types + k]) - mean;
      ss += d * d;
    }
    est.mean[k] = mean;
    est.std_error[k] = trials > 1 ? std::sqrt(ss / (m - 1.0) / m) : 0.0;
  }
  return est;
}

MeanEstimate empirical_mean_total(const SimParams& params, std::uint64_t trials,
                                  unsigned threads, std::uint64_t* capped) {
  if (trials == 0) throw InvalidArgument("trials must be >= 1");
  params.validate();
  std::vector<Count> totals(trials);
  std::vector<char> hit_cap(trials, 0);
  parallel_for(trials, threads, [&](std::size_t i) {
    Engine rng = trial_engine(params.seed, i);
    Lattice lattice(params);
    auto out = run_impl(params, rng, lattice, [](double) {}, [](double, Site, Count) {});
    totals[i] = out.final_total;
    hit_cap[i] = out.verdict == Verdict::CapReached;
  });
  const double m = static_cast<double>(trials);
  double sum = 0.0;
  for (Count c : totals) sum += static_cast<double>(c);
  const double mean = sum / m;
  double ss = 0.0;
  for (Count c : totals) ss += (static_cast<double>(c) - mean) * (static_cast<double>(c) - mean);
  if (capped) *capped = static_cast<std::uint64_t>(std::count(hit_cap.begin(), hit_cap.end(), 1));
  return {mean, trials > 1 ? std::sqrt(ss / (m - 1.0) / m) : 0.0, trials};
}

}  // namespace brw
