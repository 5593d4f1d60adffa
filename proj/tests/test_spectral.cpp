#include <cmath>
#include <limits>
#include <numbers>

#include "brw/analysis.hpp"
#include "brw/spectral.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace brw;

namespace {

// Eigenvalues of C_N are 2cos((2m+1)pi/(2N+2)), m = 0..N, so
// log|f_N(x)| = sum_m log|x + 1 - 2 lambda cos(...)|.
double log_abs_char_poly_product(int n, double lambda, double x) {
  double acc = 0.0;
  for (int m = 0; m <= n; ++m) {
    double sigma = 2.0 * std::cos((2.0 * m + 1.0) * std::numbers::pi / (2.0 * n + 2.0));
    acc += std::log(std::abs(x + 1.0 - lambda * sigma));
  }
  return acc;
}

}  // namespace

TEST_SUITE("char_poly_eval") {
  TEST_CASE("vanishes at the quoted critical rates") {
    CHECK(std::abs(char_poly_eval(IntervalRadius(1), BirthRate(std::numbers::sqrt2 / 2), 0.0)) <
          1e-15);
    CHECK(std::abs(char_poly_eval(IntervalRadius(2), BirthRate(1.0 / std::numbers::sqrt3), 0.0)) <
          1e-15);
  }

  TEST_CASE("pure death gives (x+1)^(N+1)") {
    CHECK(char_poly_eval(IntervalRadius(1), BirthRate(0.0), 0.0) == 1.0);
    CHECK(char_poly_eval(IntervalRadius(4), BirthRate(0.0), 1.0) == 32.0);
  }

  TEST_CASE("n=3, lambda=1/2, x=0 is 1/8") {
    CHECK(oracle::char_poly(3, 0.5, 0.0) == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(char_poly_eval(IntervalRadius(3), BirthRate(0.5), 0.0) ==
          doctest::Approx(0.125).epsilon(1e-14));
  }

  TEST_CASE("matches determinant by elimination for n <= 12") {
    for (int n = 1; n <= 12; ++n) {
      for (double lambda : {0.3, 0.6, 0.9}) {
        for (double x : {-1.0, 0.0, 1.0}) {
          double expected = oracle::char_poly(n, lambda, x);
          double got = char_poly_eval(IntervalRadius(n), BirthRate(lambda), x);
          INFO("n=" << n << " lambda=" << lambda << " x=" << x);
          CHECK(std::abs(got - expected) <= 1e-10 * std::abs(expected) + 1e-13);
        }
      }
    }
  }

  TEST_CASE("scaled variant survives overflow and underflow") {
    // (x+1) = 3 drives |f_N| past the double range for N = 5000.
    ScaledValue big = char_poly_eval_scaled(IntervalRadius(5000), BirthRate(0.4), 2.0);
    CHECK(big.sign == 1);
    CHECK(std::isinf(big.to_double()));
    CHECK(std::isinf(char_poly_eval(IntervalRadius(5000), BirthRate(0.4), 2.0)));
    CHECK(big.log_abs() == doctest::Approx(log_abs_char_poly_product(5000, 0.4, 2.0)).epsilon(1e-10));

    // x = -0.9 shrinks every factor: underflow territory.
    ScaledValue tiny = char_poly_eval_scaled(IntervalRadius(5000), BirthRate(0.01), -0.9);
    CHECK(tiny.log_abs() ==
          doctest::Approx(log_abs_char_poly_product(5000, 0.01, -0.9)).epsilon(1e-10));
    CHECK(tiny.to_double() == 0.0);
  }

  TEST_CASE("scaled and plain evaluations agree where both are representable") {
    for (int n : {1, 2, 7, 40, 300}) {
      ScaledValue s = char_poly_eval_scaled(IntervalRadius(n), BirthRate(0.6), 0.25);
      CHECK(s.to_double() == char_poly_eval(IntervalRadius(n), BirthRate(0.6), 0.25));
      CHECK(s.log_abs() == doctest::Approx(log_abs_char_poly_product(n, 0.6, 0.25)).epsilon(1e-11));
    }
  }
}

TEST_SUITE("build_generator") {
  TEST_CASE("n=1") {
    GeneratorMatrix a = build_generator(IntervalRadius(1), BirthRate(0.3));
    CHECK(a(0, 0) == -1.0);
    CHECK(a(0, 1) == doctest::Approx(0.6));
    CHECK(a(1, 0) == doctest::Approx(0.3));
    CHECK(a(1, 1) == -1.0);
  }

  TEST_CASE("n=2, lambda=1") {
    auto dense = build_generator(IntervalRadius(2), BirthRate(1.0)).dense();
    std::vector<double> expected{-1, 2, 0, 1, -1, 1, 0, 1, -1};
    CHECK(dense == expected);
  }

  TEST_CASE("lambda=0 is -I") {
    auto dense = build_generator(IntervalRadius(1), BirthRate(0.0)).dense();
    CHECK(dense == std::vector<double>{-1, 0, 0, -1});
  }

  TEST_CASE("structure for larger n") {
    const int n = 9;
    const double lambda = 0.7;
    GeneratorMatrix a = build_generator(IntervalRadius(n), BirthRate(lambda));
    auto ref = oracle::generator(n, lambda);
    for (int j = 0; j <= n; ++j) {
      for (int k = 0; k <= n; ++k) {
        CHECK(a(j, k) == doctest::Approx(ref[j][k]));
        if (std::abs(j - k) > 1) CHECK(a(j, k) == 0.0);
        CHECK(a(j, k) == doctest::Approx((j == k ? -1.0 : 0.0) + lambda * GeneratorMatrix::coefficient(j, k)));
      }
    }
    CHECK_THROWS_AS(a(0, n + 1), InvalidArgument);
  }
}

TEST_SUITE("spectral_radius_c") {
  TEST_CASE("small cases from the characteristic polynomial") {
    // [[0,2],[1,0]]: sigma^2 - 2 = 0.  n=2: sigma^3 - 3 sigma = 0.
    CHECK(spectral_radius_c(IntervalRadius(1), 1e-14) ==
          doctest::Approx(std::numbers::sqrt2).epsilon(1e-13));
    CHECK(spectral_radius_c(IntervalRadius(2), 1e-14) ==
          doctest::Approx(std::numbers::sqrt3).epsilon(1e-13));
  }

  TEST_CASE("agrees with power iteration") {
    for (int n : {3, 5, 8, 13}) {
      INFO("n=" << n);
      CHECK(spectral_radius_c(IntervalRadius(n), 1e-13) ==
            doctest::Approx(oracle::power_sigma_max(n)).epsilon(1e-9));
    }
  }

  TEST_CASE("inverse equals critical lambda") {
    for (int n : {1, 2, 5, 17, 60}) {
      CHECK(1.0 / spectral_radius_c(IntervalRadius(n), 1e-14) ==
            doctest::Approx(critical_lambda(IntervalRadius(n), 1e-14).lambda_c).epsilon(1e-13));
    }
  }

  TEST_CASE("lies in (1, 2) and increases with n") {
    double prev = 1.0;
    for (int n = 1; n <= 300; ++n) {
      double s = spectral_radius_c(IntervalRadius(n), 1e-14);
      CHECK(s > prev);
      CHECK(s < 2.0);
      prev = s;
    }
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(spectral_radius_c(IntervalRadius(3), 0.0), InvalidArgument);
    CHECK_THROWS_AS(spectral_radius_c(IntervalRadius(3), -1.0), InvalidArgument);
    try {
      spectral_radius_c(IntervalRadius(3), 1e-20);
      FAIL("expected tolerance-not-reached");
    } catch (const NumericalError& e) {
      CHECK(e.kind() == NumericalError::Kind::ToleranceNotReached);
    }
  }

  TEST_CASE("Sturm count brackets every eigenvalue") {
    const int n = 6;
    for (int m = 0; m <= n; ++m) {
      double sigma = 2.0 * std::cos((2.0 * m + 1.0) * std::numbers::pi / (2.0 * n + 2.0));
      CHECK(count_eigenvalues_below(IntervalRadius(n), sigma + 1e-9) -
                count_eigenvalues_below(IntervalRadius(n), sigma - 1e-9) ==
            1);
    }
    CHECK(count_eigenvalues_below(IntervalRadius(n), 3.0) == n + 1);
    CHECK(count_eigenvalues_below(IntervalRadius(n), -3.0) == 0);
  }
}

TEST_SUITE("critical_lambda") {
  TEST_CASE("quoted and derived values") {
    CHECK(critical_lambda(IntervalRadius(1)).lambda_c ==
          doctest::Approx(std::numbers::sqrt2 / 2).epsilon(1e-11));
    CHECK(critical_lambda(IntervalRadius(2)).lambda_c ==
          doctest::Approx(std::numbers::sqrt3 / 3).epsilon(1e-11));
    // smallest root of 1 - 4u + 2u^2, lambda = sqrt(u)
    const double u = (4.0 - std::sqrt(8.0)) / 4.0;
    CHECK(critical_lambda(IntervalRadius(3)).lambda_c == doctest::Approx(std::sqrt(u)).epsilon(1e-11));
    CHECK(std::sqrt(u) == doctest::Approx(std::sqrt(1.0 - std::numbers::sqrt2 / 2)).epsilon(1e-15));
  }

  TEST_CASE("record fields") {
    CriticalPoint cp = critical_lambda(IntervalRadius(4), 1e-12);
    CHECK(cp.n.value() == 4);
    CHECK(cp.method == CriticalMethod::SturmEigen);
    CHECK(cp.bracket_width <= 1e-12);
    CHECK(cp.residual <= 1e-11);
    CHECK(cp.lambda_c > 0.5);
    CHECK(cp.lambda_c <= std::numbers::sqrt2 / 2 + 1e-12);
  }

  TEST_CASE("polynomial route agrees to 1e-9 for n <= 200") {
    for (int n = 1; n <= 200; ++n) {
      CriticalPoint sturm = critical_lambda(IntervalRadius(n));
      CriticalPoint poly = critical_lambda_poly(IntervalRadius(n));
      CHECK(poly.method == CriticalMethod::PolyRoot);
      CHECK(std::abs(sturm.lambda_c - poly.lambda_c) <= 1e-9);
    }
  }

  TEST_CASE("polynomial route lands on a root of f_N(0)") {
    for (int n : {1, 2, 3, 10, 50}) {
      double l = critical_lambda_poly(IntervalRadius(n), 1e-15).lambda_c;
      double below = char_poly_eval(IntervalRadius(n), BirthRate(l - 1e-9), 0.0);
      double above = char_poly_eval(IntervalRadius(n), BirthRate(l + 1e-9), 0.0);
      CHECK(below > 0.0);
      CHECK(above < 0.0);
    }
  }

  TEST_CASE("strictly decreasing and above 1/2") {
    double prev = 1.0;
    for (int n = 1; n <= 500; ++n) {
      double l = critical_lambda(IntervalRadius(n), 1e-15).lambda_c;
      CHECK(l < prev);
      CHECK(l > 0.5);
      prev = l;
    }
  }

  TEST_CASE("closed form cosine law") {
    for (int n : {1, 2, 3, 10, 100, 1000}) {
      CHECK(std::abs(critical_lambda(IntervalRadius(n), 1e-15).lambda_c -
                     closed_form_lambda_c(IntervalRadius(n))) <= 1e-12);
    }
  }
}

TEST_SUITE("malthusian_parameter") {
  TEST_CASE("examples") {
    CHECK(std::abs(malthusian_parameter(IntervalRadius(1), BirthRate(std::numbers::sqrt2 / 2))) < 1e-12);
    CHECK(malthusian_parameter(IntervalRadius(1), BirthRate(0.9)) ==
          doctest::Approx(0.9 * std::numbers::sqrt2 - 1.0).epsilon(1e-12));
    CHECK(malthusian_parameter(IntervalRadius(2), BirthRate(0.5)) ==
          doctest::Approx(0.5 * std::numbers::sqrt3 - 1.0).epsilon(1e-12));
    CHECK(malthusian_parameter(IntervalRadius(2), BirthRate(0.5)) < 0.0);
  }

  TEST_CASE("increasing in lambda and in n") {
    for (int n = 1; n <= 12; ++n) {
      for (double l = 0.1; l < 1.0; l += 0.05) {
        double here = malthusian_parameter(IntervalRadius(n), BirthRate(l));
        CHECK(malthusian_parameter(IntervalRadius(n), BirthRate(l + 0.01)) > here);
        CHECK(malthusian_parameter(IntervalRadius(n + 1), BirthRate(l)) > here);
      }
    }
  }
}

TEST_SUITE("critical_n") {
  TEST_CASE("examples") {
    CHECK(critical_n(BirthRate(0.75)) == 1);
    CHECK(critical_n(BirthRate(0.6)) == 2);
    CHECK(critical_n(BirthRate(0.52)) == 5);
    CHECK(critical_lambda(IntervalRadius(5)).lambda_c < 0.52);
    CHECK(critical_lambda(IntervalRadius(4)).lambda_c > 0.52);
  }

  TEST_CASE("subcritical rates are rejected") {
    CHECK_THROWS_AS(critical_n(BirthRate(0.5)), InvalidArgument);
    CHECK_THROWS_AS(critical_n(BirthRate(0.3)), InvalidArgument);
  }

  TEST_CASE("at least 2 on (1/2, sqrt2/2]") {
    for (double l : {0.501, 0.55, 0.65, 0.7071}) CHECK(critical_n(BirthRate(l)) >= 2);
  }

  TEST_CASE("non-increasing in lambda") {
    int prev = critical_n(BirthRate(0.5005));
    for (double l = 0.501; l <= 1.0; l += 0.0025) {
      int here = critical_n(BirthRate(l));
      CHECK(here <= prev);
      prev = here;
    }
  }

  TEST_CASE("consistent with critical_lambda on either side") {
    for (int n = 1; n <= 40; ++n) {
      const double lc = critical_lambda(IntervalRadius(n)).lambda_c;
      CHECK(critical_n(BirthRate(lc + 1e-6)) <= n);
      if (n >= 2) CHECK(critical_n(BirthRate(lc - 1e-6)) > n);
    }
  }

  TEST_CASE("large answers via doubling then bisection") {
    const double l = 0.5 + 1e-6;
    int nc = critical_n(BirthRate(l));
    CHECK(l > critical_lambda(IntervalRadius(nc)).lambda_c);
    CHECK(l <= critical_lambda(IntervalRadius(nc - 1)).lambda_c);
  }
}

TEST_SUITE("phase_table") {
  TEST_CASE("first rows") {
    auto rows = phase_table(6, kDefaultTolerance, 2);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].n == 1);
    CHECK(rows[0].lambda_c == doctest::Approx(0.70710678).epsilon(1e-8));
    CHECK(rows[0].scaled_gap == doctest::Approx(std::numbers::sqrt2 - 1.0).epsilon(1e-10));
    CHECK(rows[1].n == 2);
    CHECK(rows[1].lambda_c == doctest::Approx(0.57735027).epsilon(1e-8));
    CHECK(rows[1].scaled_gap == doctest::Approx(4.0 * (2.0 / std::numbers::sqrt3 - 1.0)).epsilon(1e-10));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(rows[i].n == static_cast<int>(i) + 1);
      CHECK(rows[i].scaled_gap > 0.0);
    }
  }

  TEST_CASE("same rows for any worker count") {
    auto one = phase_table(40, 1e-13, 1);
    auto many = phase_table(40, 1e-13, 4);
    for (std::size_t i = 0; i < one.size(); ++i) {
      CHECK(one[i].lambda_c == many[i].lambda_c);
    }
  }

  TEST_CASE("scaled gap settles") {
    PhaseRow a = phase_row(IntervalRadius(10'000), 1e-15);
    PhaseRow b = phase_row(IntervalRadius(20'000), 1e-15);
    CHECK(std::abs(a.scaled_gap - b.scaled_gap) / b.scaled_gap < 1e-3);
  }

  TEST_CASE("rejects n_max < 1") { CHECK_THROWS_AS(phase_table(0), InvalidArgument); }
}

TEST_SUITE("domain types") {
  TEST_CASE("BirthRate and IntervalRadius validate") {
    CHECK_THROWS_AS(BirthRate(-0.1), InvalidArgument);
    CHECK_THROWS_AS(BirthRate(std::nan("")), InvalidArgument);
    CHECK_THROWS_AS(BirthRate{std::numeric_limits<double>::infinity()}, InvalidArgument);
    CHECK_THROWS_AS(IntervalRadius(0), InvalidArgument);
    CHECK(IntervalRadius(3).types() == 4);
    CHECK(IntervalRadius(3).contains(-3));
    CHECK_FALSE(IntervalRadius(3).contains(4));
  }
}
