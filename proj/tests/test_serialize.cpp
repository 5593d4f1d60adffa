#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "brw/analysis.hpp"
#include "brw/errors.hpp"
#include "brw/serialize.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace brw;

namespace {

// 15 significant digits via iostreams, independent of format_number.
double at15(double v) {
  std::ostringstream s;
  s.precision(15);
  s << v;
  return std::stod(s.str());
}

bool same15(double got, double original) {
  if (std::isnan(original)) return std::isnan(got);
  return got == at15(original);
}

}  // namespace

TEST_SUITE("number formatting") {
  TEST_CASE("fifteen significant digits") {
    CHECK(format_number(std::sqrt(2.0) / 2) == "0.707106781186548");
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1e-300) == "1e-300");
    CHECK(format_number(-2.5) == "-2.5");
    CHECK(format_number(123456789012345678.0) == "1.23456789012346e+17");
  }

  TEST_CASE("round15 is idempotent and within half an ulp of the 15th digit") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> expo(-200, 200);
    for (int i = 0; i < 20000; ++i) {
      const double v = std::ldexp(mant(rng), expo(rng));
      const double r = round15(v);
      CHECK(round15(r) == r);
      CHECK(r == at15(v));
      CHECK(std::abs(r - v) <= 5e-15 * std::abs(v));
    }
  }
}

TEST_SUITE("json round trip") {
  TEST_CASE("critical point") {
    for (int n : {1, 2, 7, 300}) {
      CriticalPoint cp = critical_lambda(IntervalRadius(n));
      std::string text = to_json(cp);
      CHECK(text.find("\"schema\": \"brw-phase/1\"") != std::string::npos);
      CriticalPoint back = critical_point_from_json(text);
      CHECK(back.n.value() == n);
      CHECK(back.method == cp.method);
      CHECK(same15(back.lambda_c, cp.lambda_c));
      CHECK(same15(back.residual, cp.residual));
      CHECK(same15(back.bracket_width, cp.bracket_width));
      CHECK(to_json(back) == text);
    }
  }

  TEST_CASE("phase rows") {
    auto rows = phase_table(40);
    auto back = phase_rows_from_json(to_json(rows));
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(back[i].n == rows[i].n);
      CHECK(same15(back[i].lambda_c, rows[i].lambda_c));
      CHECK(same15(back[i].scaled_gap, rows[i].scaled_gap));
    }
  }

  TEST_CASE("mean matrix") {
    MeanMatrix m = mean_matrix(IntervalRadius(4), BirthRate(0.61), 3.7);
    MeanMatrix back = mean_matrix_from_json(to_json(m));
    CHECK(back.n.value() == 4);
    CHECK(same15(back.lambda.value(), 0.61));
    CHECK(same15(back.t, 3.7));
    REQUIRE(back.entries.size() == m.entries.size());
    for (std::size_t i = 0; i < m.entries.size(); ++i) CHECK(same15(back.entries[i], m.entries[i]));
  }

  TEST_CASE("survival estimate") {
    SurvivalEstimate s = summarize_survival(337, 12, 10000, 0xFFFFFFFFFFFFFFFFull);
    std::string text = to_json(s);
    SurvivalEstimate back = survival_from_json(text);
    CHECK(same15(back.p_hat, s.p_hat));
    CHECK(same15(back.ci_low, s.ci_low));
    CHECK(same15(back.ci_high, s.ci_high));
    CHECK(same15(back.censored_fraction, s.censored_fraction));
    CHECK(back.trials == 10000);
    CHECK(back.seed == 0xFFFFFFFFFFFFFFFFull);
    auto j = nlohmann::json::parse(text);
    for (const char* key : {"schema", "p_hat", "ci_low", "ci_high", "trials", "censored_fraction", "seed"}) {
      CHECK(j.contains(key));
    }
  }

  TEST_CASE("genealogy") {
    SimParams p;
    p.lambda = BirthRate(0.7);
    p.initial = Configuration::single(-1, 2);
    p.t_max = 3.0;
    Genealogy g;
    for (std::uint64_t i = 0; g.individuals.size() < 10; ++i) {
      Engine rng = trial_engine(12, i);
      g = build_genealogy(p, rng);
    }
    Genealogy back = genealogy_from_json(to_json(g));
    CHECK(same15(back.lambda.value(), 0.7));
    CHECK(back.t_max == 3.0);
    CHECK(back.truncated == g.truncated);
    REQUIRE(back.individuals.size() == g.individuals.size());
    for (std::size_t i = 0; i < g.individuals.size(); ++i) {
      const Individual& a = g.individuals[i];
      const Individual& b = back.individuals[i];
      CHECK(b.id == a.id);
      CHECK(b.parent == a.parent);
      CHECK(b.site == a.site);
      CHECK(same15(b.birth_time, a.birth_time));
      CHECK(same15(b.death_time, a.death_time));
      CHECK(b.birth_mark.has_value() == a.birth_mark.has_value());
      if (a.birth_mark) CHECK(same15(*b.birth_mark, *a.birth_mark));
    }
  }

  TEST_CASE("asymptotic report") {
    const int radii[] = {10, 20, 40};
    AsymptoticReport r = asymptotic_report(radii);
    AsymptoticReport back = asymptotic_report_from_json(to_json(r));
    REQUIRE(back.rows.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(back.rows[i].n == r.rows[i].n);
      CHECK(same15(back.rows[i].scaled_gap, r.rows[i].scaled_gap));
      CHECK(same15(back.rows[i].closed_form_lambda_c, r.rows[i].closed_form_lambda_c));
    }
    CHECK(same15(back.extrapolated_limit, r.extrapolated_limit));
    CHECK(same15(back.relative_change, r.relative_change));
    CHECK(back.supported == r.supported);
    REQUIRE(back.candidates.size() == r.candidates.size());
    for (std::size_t i = 0; i < r.candidates.size(); ++i) {
      CHECK(back.candidates[i].name == r.candidates[i].name);
      CHECK(same15(back.candidates[i].value, r.candidates[i].value));
    }
  }

  TEST_CASE("coupling report with and without a violation") {
    CouplingConfig cfg;
    cfg.lambda_pairs = {{0.55, 0.65}};
    cfg.n_pairs = {{2, 4}};
    CouplingReport r;
    r.genealogies = 100;
    r.checks = 700;
    r.events_checked = 123456;
    CouplingReport back = coupling_report_from_json(to_json(r, cfg));
    CHECK(back.checks == 700);
    CHECK(back.events_checked == 123456);
    CHECK(back.all_dominated());
    CHECK(to_json(r, cfg).find("\"all_dominated\": true") != std::string::npos);

    r.violations = 1;
    r.first_violation = CouplingViolation{"restrict 2<=4 @0.65", 17, {1.25, -3, 2, 1}};
    back = coupling_report_from_json(to_json(r, cfg));
    REQUIRE(back.first_violation.has_value());
    CHECK(back.first_violation->check == "restrict 2<=4 @0.65");
    CHECK(back.first_violation->genealogy == 17);
    CHECK(back.first_violation->at.site == -3);
    CHECK(back.first_violation->at.time == 1.25);
    CHECK_FALSE(back.all_dominated());
  }

  TEST_CASE("non-finite values serialize as null") {
    CriticalPoint cp = critical_lambda(IntervalRadius(3));
    cp.residual = std::nan("");
    std::string text = to_json(cp);
    CHECK(text.find("\"residual\": null") != std::string::npos);
    CHECK(std::isnan(critical_point_from_json(text).residual));
  }

  TEST_CASE("foreign and malformed documents are rejected") {
    CHECK_THROWS_AS(survival_from_json("{\"p_hat\": 0.5}"), InvalidArgument);
    CHECK_THROWS_AS(survival_from_json("{\"schema\": \"brw-phase/2\"}"), InvalidArgument);
    CHECK_THROWS_AS(survival_from_json("[1, 2]"), InvalidArgument);
    CHECK_THROWS_AS(critical_point_from_json("{\"schema\": "), InvalidArgument);
  }
}

TEST_SUITE("csv") {
  TEST_CASE("phase table") {
    std::string csv = phase_csv(phase_table(3));
    CHECK(csv.rfind("n,lambda_c,scaled_gap\n", 0) == 0);
    CHECK(csv.find('\r') == std::string::npos);
    CHECK(csv.find("\n1,0.707106781186") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    CHECK(csv.back() == '\n');
  }

  TEST_CASE("mean curve") {
    MeanCurve c{{0.0, 1.0}, {1.0, 2.5}};
    CHECK(mean_curve_csv(c) == "t,expected_total\n0,1\n1,2.5\n");
  }

  TEST_CASE("asymptotics") {
    const int radii[] = {5, 10};
    std::string csv = asymptotic_csv(asymptotic_report(radii));
    CHECK(csv.rfind("n,lambda_c,scaled_gap,closed_form_lambda_c\n5,", 0) == 0);
  }

  TEST_CASE("trajectory rows") {
    std::ostringstream out;
    TrajectoryCsvWriter w(out);
    Configuration c;
    c.add(-1, 2);
    c.add(1, 1);
    w.write(0.5, c);
    w.write(0.75, 0, 3);
    CHECK(out.str() == "time,site,count\n0.5,-1,2\n0.5,1,1\n0.75,0,3\n");
  }
}
