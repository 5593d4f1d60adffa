#include "brw/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "brw/parallel.hpp"
#include "brw/serialize.hpp"

namespace brw {

double closed_form_lambda_c(IntervalRadius n) {
  const double angle = std::numbers::pi / (2.0 * n.value() + 2.0);
  return 1.0 / (2.0 * std::cos(angle));
}

AsymptoticReport asymptotic_report(std::span<const int> radii, double tol, unsigned threads) {
  if (radii.size() < 2) throw InvalidArgument("asymptotics needs at least two radii");
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (radii[i] <= radii[i - 1]) throw InvalidArgument("radii must be strictly increasing");
  }
  AsymptoticReport report;
  report.rows.resize(radii.size());
  parallel_for(radii.size(), threads, [&](std::size_t i) {
    IntervalRadius n(radii[i]);
    PhaseRow row = phase_row(n, tol);
    report.rows[i] = {row.n, row.lambda_c, row.scaled_gap, closed_form_lambda_c(n)};
  });

  for (const AsymptoticRow& r : report.rows) {
    report.closed_form_max_error =
        std::max(report.closed_form_max_error, std::abs(r.lambda_c - r.closed_form_lambda_c));
  }
  const AsymptoticRow& a = report.rows[report.rows.size() - 2];
  const AsymptoticRow& b = report.rows.back();
  report.relative_change = std::abs(b.scaled_gap - a.scaled_gap) / b.scaled_gap;
  // g(N) = L + c/N + O(1/N^2)
  report.extrapolated_limit =
      (b.n * b.scaled_gap - a.n * a.scaled_gap) / static_cast<double>(b.n - a.n);

  const double pi2 = std::numbers::pi * std::numbers::pi;
  for (auto [name, value] : {std::pair<const char*, double>{"pi^2/2", pi2 / 2.0},
                             std::pair<const char*, double>{"pi^2/8", pi2 / 8.0}}) {
    report.candidates.push_back(
        {name, value, std::abs(report.extrapolated_limit - value) / value});
  }
  report.supported = std::min_element(report.candidates.begin(), report.candidates.end(),
                                      [](const LimitCandidate& x, const LimitCandidate& y) {
                                        return x.relative_error < y.relative_error;
                                      })
                         ->name;
  return report;
}

namespace {

Membership both(const Membership& a, const Membership& b) {
  Membership out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] && b[i];
  return out;
}

struct GenealogyResult {
  std::uint64_t checks = 0;
  std::uint64_t events = 0;
  std::uint64_t violations = 0;
  bool truncated = false;
  std::optional<CouplingViolation> first;
};

}  // namespace

CouplingReport coupling_check(const CouplingConfig& config) {
  if (config.lambda_pairs.empty()) throw InvalidArgument("couple-check needs at least one lambda pair");
  if (config.genealogies == 0) throw InvalidArgument("couple-check needs genealogies >= 1");
  for (auto [l1, l2] : config.lambda_pairs) {
    if (!(l1 >= 0.0) || !(l2 > 0.0) || l1 > l2) {
      throw InvalidArgument("lambda pairs must satisfy 0 <= lambda1 <= lambda2, lambda2 > 0");
    }
  }
  std::set<int> radii;
  for (auto [n1, n2] : config.n_pairs) {
    if (n1 < 1 || n2 <= n1) throw InvalidArgument("n pairs must satisfy 1 <= n1 < n2");
    radii.insert(n1);
    radii.insert(n2);
  }

  const std::size_t total = config.lambda_pairs.size() * config.genealogies;
  std::vector<GenealogyResult> results(total);
  parallel_for(total, config.threads, [&](std::size_t idx) {
    const auto [l1, l2] = config.lambda_pairs[idx / config.genealogies];
    const std::uint64_t gi = idx % config.genealogies;
    SimParams p;
    p.lambda = BirthRate(l2);
    p.initial = config.initial;
    p.t_max = config.t_max;
    p.pop_cap = config.pop_cap;
    Engine rng = trial_engine(config.seed, idx);
    Genealogy g = build_genealogy(p, rng);

    GenealogyResult& res = results[idx];
    res.truncated = g.truncated;
    auto check = [&](const std::string& name, const Membership& lower, const Membership& upper) {
      DominationReport d = check_domination(g, lower, upper);
      ++res.checks;
      res.events += d.events_checked;
      if (!d.dominated()) {
        ++res.violations;
        if (!res.first) res.first = CouplingViolation{name, gi, *d.violation};
      }
    };

    const Membership full = full_membership(g);
    const Membership thin = thinned_membership(g, l1);
    const std::string lo = format_number(l1);
    const std::string hi = format_number(l2);
    check("thin " + lo + "<=" + hi, thin, full);

    for (int n : radii) {
      const Membership r = restricted_membership(g, IntervalRadius(n));
      check("thin restrict " + std::to_string(n) + " " + lo + "<=" + hi, both(r, thin), r);
    }
    for (auto [n1, n2] : config.n_pairs) {
      const Membership r1 = restricted_membership(g, IntervalRadius(n1));
      const Membership r2 = restricted_membership(g, IntervalRadius(n2));
      const std::string tag = std::to_string(n1) + "<=" + std::to_string(n2);
      check("restrict " + tag + " @" + hi, r1, r2);
      check("restrict " + std::to_string(n2) + "<=Z @" + hi, r2, full);
      check("restrict " + tag + " @" + lo, both(r1, thin), both(r2, thin));
      check("restrict " + std::to_string(n2) + "<=Z @" + lo, both(r2, thin), thin);
    }
  });

  CouplingReport report;
  report.genealogies = total;
  for (const GenealogyResult& r : results) {
    report.checks += r.checks;
    report.events_checked += r.events;
    report.violations += r.violations;
    report.truncated_genealogies += r.truncated;
    if (!report.first_violation && r.first) report.first_violation = r.first;
  }
  return report;
}

}  // namespace brw
