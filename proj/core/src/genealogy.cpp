#include "brw/genealogy.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <unordered_map>

namespace brw {

namespace {

struct Pending {
  double birth_time;
  std::uint64_t seq;  // tie-break so identical times pop in creation order
  std::optional<std::uint64_t> parent;
  Site site;
  std::optional<double> mark;

  bool operator>(const Pending& o) const {
    return birth_time != o.birth_time ? birth_time > o.birth_time : seq > o.seq;
  }
};

}  // namespace

void Genealogy::check_query(double t) const {
  const bool outside = truncated ? !(t < complete_until) : !(t <= complete_until);
  if (t < 0.0 || outside) {
    throw QueryBeyondTruncation("query time " + std::to_string(t) +
                                " outside recorded window [0, " +
                                std::to_string(complete_until) + ")");
  }
}

Genealogy build_genealogy(const SimParams& params, Engine& rng) {
  params.validate();
  if (params.restricted()) {
    throw InvalidArgument("genealogies are built for the unrestricted walk; restrict afterwards");
  }
  if (!std::isfinite(params.t_max)) {
    throw InvalidArgument("genealogy mode needs a finite t_max");
  }
  const double lambda = params.lambda.value();
  std::exponential_distribution<double> unit_exp(1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Genealogy g;
  g.lambda = params.lambda;
  g.t_max = params.t_max;
  g.complete_until = params.t_max;

  std::priority_queue<Pending, std::vector<Pending>, std::greater<>> queue;
  std::uint64_t seq = 0;
  for (const auto& [site, c] : params.initial.sites()) {
    for (Count i = 0; i < c; ++i) queue.push({0.0, seq++, std::nullopt, site, std::nullopt});
  }

  while (!queue.empty()) {
    if (g.individuals.size() >= params.pop_cap) {
      g.truncated = true;
      g.complete_until = queue.top().birth_time;
      break;
    }
    Pending p = queue.top();
    queue.pop();

    Individual ind;
    ind.id = g.individuals.size();
    ind.parent = p.parent;
    ind.site = p.site;
    ind.birth_time = p.birth_time;
    ind.birth_mark = p.mark;
    ind.death_time = p.birth_time + unit_exp(rng);

    if (lambda > 0.0) {
      const double horizon = std::min(ind.death_time, params.t_max);
      for (Site target : {p.site - 1, p.site + 1}) {
        for (double s = p.birth_time + unit_exp(rng) / lambda; s < horizon;
             s += unit_exp(rng) / lambda) {
          queue.push({s, seq++, ind.id, target, unit(rng)});
        }
      }
    }
    g.individuals.push_back(ind);
  }
  return g;
}

Genealogy build_genealogy(const SimParams& params) {
  Engine rng = trial_engine(params.seed, 0);
  return build_genealogy(params, rng);
}

Membership full_membership(const Genealogy& g) {
  return Membership(g.individuals.size(), true);
}

Membership restricted_membership(const Genealogy& g, IntervalRadius n) {
  Membership m(g.individuals.size(), false);
  for (const Individual& ind : g.individuals) {
    const bool inside = n.contains(ind.site);
    m[ind.id] = ind.parent ? (inside && m[*ind.parent]) : inside;
  }
  return m;
}

Membership thinned_membership(const Genealogy& g, double lambda1) {
  const double lambda2 = g.lambda.value();
  if (!(lambda1 >= 0.0) || lambda1 > lambda2) {
    throw RateOrderViolation("thinning needs 0 <= lambda1 <= lambda2 (" +
                             std::to_string(lambda1) + " vs " + std::to_string(lambda2) + ")");
  }
  const double accept = lambda2 > 0.0 ? lambda1 / lambda2 : 1.0;
  Membership m(g.individuals.size(), false);
  for (const Individual& ind : g.individuals) {
    m[ind.id] = ind.parent ? (*ind.birth_mark < accept && m[*ind.parent]) : true;
  }
  return m;
}

std::vector<Configuration> counts_at(const Genealogy& g, const Membership& members,
                                     std::span<const double> times) {
  for (double t : times) g.check_query(t);
  std::vector<Configuration> out(times.size());
  for (const Individual& ind : g.individuals) {
    if (!members[ind.id]) continue;
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (ind.alive_at(times[i])) out[i].add(ind.site, 1);
    }
  }
  return out;
}

std::vector<Configuration> restrict_genealogy(const Genealogy& g, IntervalRadius n,
                                              std::span<const double> times) {
  return counts_at(g, restricted_membership(g, n), times);
}

Genealogy thin_genealogy(const Genealogy& g, double lambda1) {
  Membership keep = thinned_membership(g, lambda1);
  Genealogy out;
  out.lambda = BirthRate(lambda1);
  out.t_max = g.t_max;
  out.truncated = g.truncated;
  out.complete_until = g.complete_until;
  for (const Individual& ind : g.individuals) {
    if (keep[ind.id]) out.individuals.push_back(ind);
  }
  return out;
}

std::vector<double> event_times(const Genealogy& g) {
  std::vector<double> times;
  auto inside = [&](double t) { return g.truncated ? t < g.complete_until : t <= g.complete_until; };
  for (const Individual& ind : g.individuals) {
    if (inside(ind.birth_time)) times.push_back(ind.birth_time);
    if (inside(ind.death_time)) times.push_back(ind.death_time);
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  return times;
}

DominationReport check_domination(const Genealogy& g, const Membership& lower,
                                  const Membership& upper) {
  struct Event {
    double time;
    bool birth;
    std::uint64_t id;
  };
  auto inside = [&](double t) { return g.truncated ? t < g.complete_until : t <= g.complete_until; };
  std::vector<Event> events;
  events.reserve(2 * g.individuals.size());
  for (const Individual& ind : g.individuals) {
    if (inside(ind.birth_time)) events.push_back({ind.birth_time, true, ind.id});
    if (inside(ind.death_time)) events.push_back({ind.death_time, false, ind.id});
  }
  // Births before deaths at equal times; only roots share a time (t = 0).
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.time != b.time) return a.time < b.time;
    return a.birth > b.birth;
  });

  std::unordered_map<Site, std::pair<Count, Count>> counts;
  DominationReport report;
  for (const Event& e : events) {
    const Individual& ind = g.individuals[e.id];
    auto& [lo, hi] = counts[ind.site];
    const Count delta = e.birth ? 1 : -1;
    if (lower[e.id]) lo += delta;
    if (upper[e.id]) hi += delta;
    ++report.events_checked;
    if (lo > hi) {
      report.violation = DominationViolation{e.time, ind.site, lo, hi};
      break;
    }
  }
  return report;
}

}  // namespace brw
