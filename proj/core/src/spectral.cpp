#include "brw/spectral.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "brw/parallel.hpp"

namespace brw {

namespace {

constexpr double kRescaleHigh = 0x1p+400;
constexpr double kRescaleLow = 0x1p-400;
constexpr int kMaxBisections = 4000;

void require_tolerance(double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw InvalidArgument("tolerance must be finite and > 0");
  }
}

// Bracket [lo, hi] around sigma_max(C_N): count_below(lo) <= N < count_below(hi).
struct SigmaBracket {
  double lo;
  double hi;
};

template <typename WidthOk>
SigmaBracket bisect_sigma_max(IntervalRadius n, WidthOk&& width_ok) {
  // Gershgorin: every row of the symmetrised matrix sums to at most 1 + sqrt2.
  SigmaBracket b{0.0, 1.0 + std::numbers::sqrt2 + 0.125};
  const int all = n.types();
  for (int it = 0; it < kMaxBisections && !width_ok(b); ++it) {
    double mid = 0.5 * (b.lo + b.hi);
    if (mid <= b.lo || mid >= b.hi) break;
    if (count_eigenvalues_below(n, mid) == all) {
      b.hi = mid;
    } else {
      b.lo = mid;
    }
  }
  return b;
}

// True iff every leading minor f_0(0), ..., f_N(0) of -A_N is positive, which
// for this diagonally-symmetrisable matrix is exactly lambda < lambda_c(N).
bool below_critical(IntervalRadius n, double lambda) {
  const double l2 = lambda * lambda;
  double prev = 1.0;            // f_0(0)
  double cur = 1.0 - 2.0 * l2;  // f_1(0)
  if (!(cur > 0.0)) return false;
  for (int k = 2; k <= n.value(); ++k) {
    double next = cur - l2 * prev;
    if (!(next > 0.0)) return false;
    prev = cur;
    cur = next;
    if (cur < kRescaleLow) {
      prev *= kRescaleHigh;
      cur *= kRescaleHigh;
    }
  }
  return true;
}

}  // namespace

double ScaledValue::log_abs() const {
  if (sign == 0) return -std::numeric_limits<double>::infinity();
  return std::log(mantissa) + static_cast<double>(exponent) * std::numbers::ln2;
}

double ScaledValue::to_double() const {
  if (sign == 0) return 0.0;
  if (exponent > std::numeric_limits<int>::max()) {
    return sign * std::numeric_limits<double>::infinity();
  }
  if (exponent < std::numeric_limits<int>::min()) return sign * 0.0;
  return sign * std::ldexp(mantissa, static_cast<int>(exponent));
}

ScaledValue char_poly_eval_scaled(IntervalRadius n, BirthRate lambda,
                                  double x) {
  const double l2 = lambda.value() * lambda.value();
  const double shift = x + 1.0;
  double prev = shift;                        // f_0
  double cur = shift * shift - 2.0 * l2;      // f_1
  long long exponent = 0;
  for (int k = 2; k <= n.value(); ++k) {
    double next = shift * cur - l2 * prev;
    prev = cur;
    cur = next;
    double m = std::max(std::abs(prev), std::abs(cur));
    if (m > kRescaleHigh || (m < kRescaleLow && m != 0.0)) {
      int e = 0;
      std::frexp(m, &e);
      prev = std::ldexp(prev, -e);
      cur = std::ldexp(cur, -e);
      exponent += e;
    }
  }
  ScaledValue out;
  if (cur == 0.0) return out;
  int e = 0;
  double m = std::frexp(cur, &e);
  out.sign = m < 0.0 ? -1 : 1;
  out.mantissa = std::abs(m);
  out.exponent = exponent + e;
  return out;
}

double char_poly_eval(IntervalRadius n, BirthRate lambda, double x) {
  return char_poly_eval_scaled(n, lambda, x).to_double();
}

GeneratorMatrix::GeneratorMatrix(IntervalRadius n, BirthRate lambda)
    : n_(n), lambda_(lambda) {}

double GeneratorMatrix::coefficient(int j, int k) {
  if (j == 0 && k == 1) return 2.0;
  if (j == k + 1 || k == j + 1) return 1.0;
  return 0.0;
}

double GeneratorMatrix::operator()(int j, int k) const {
  if (j < 0 || k < 0 || j >= size() || k >= size()) {
    throw InvalidArgument("generator index out of range");
  }
  return (j == k ? -1.0 : 0.0) + lambda_.value() * coefficient(j, k);
}

std::vector<double> GeneratorMatrix::dense() const {
  const int s = size();
  std::vector<double> out(static_cast<std::size_t>(s) * s, 0.0);
  for (int j = 0; j < s; ++j) {
    for (int k = std::max(0, j - 1); k <= std::min(s - 1, j + 1); ++k) {
      out[static_cast<std::size_t>(j) * s + k] = (*this)(j, k);
    }
  }
  return out;
}

GeneratorMatrix build_generator(IntervalRadius n, BirthRate lambda) {
  return GeneratorMatrix(n, lambda);
}

std::vector<double> symmetrized_offdiagonal(IntervalRadius n) {
  std::vector<double> e(static_cast<std::size_t>(n.value()), 1.0);
  e[0] = std::numbers::sqrt2;
  return e;
}

std::vector<double> symmetrizer_diagonal(IntervalRadius n) {
  std::vector<double> d(static_cast<std::size_t>(n.types()),
                        std::numbers::sqrt2);
  d[0] = 1.0;
  return d;
}

int count_eigenvalues_below(IntervalRadius n, double x) {
  // LDL^T pivots of (T - xI); off-diagonal squares are 2, 1, 1, ...
  int count = 0;
  double q = -x;
  if (q == 0.0) q = -std::numeric_limits<double>::min();
  if (q < 0.0) ++count;
  for (int i = 1; i <= n.value(); ++i) {
    const double e2 = (i == 1) ? 2.0 : 1.0;
    q = -x - e2 / q;
    if (q == 0.0) q = -std::numeric_limits<double>::min();
    if (q < 0.0) ++count;
  }
  return count;
}

double spectral_radius_c(IntervalRadius n, double tol) {
  require_tolerance(tol);
  SigmaBracket b = bisect_sigma_max(
      n, [tol](const SigmaBracket& br) { return br.hi - br.lo <= tol; });
  if (b.hi - b.lo > tol) {
    throw NumericalError(NumericalError::Kind::ToleranceNotReached,
                         "sigma_max bisection stalled at width " +
                             std::to_string(b.hi - b.lo));
  }
  return 0.5 * (b.lo + b.hi);
}

std::string_view to_string(CriticalMethod m) {
  return m == CriticalMethod::SturmEigen ? "sturm-eigen" : "poly-root";
}

CriticalMethod critical_method_from_string(std::string_view s) {
  if (s == "sturm-eigen") return CriticalMethod::SturmEigen;
  if (s == "poly-root") return CriticalMethod::PolyRoot;
  throw InvalidArgument("unknown critical method: " + std::string(s));
}

CriticalPoint critical_lambda_poly(IntervalRadius n, double tol) {
  require_tolerance(tol);
  // lambda_c(N) lies in (1/2, sqrt2/2]; the top end is nudged up so the
  // predicate is reliably false there despite rounding at N = 1.
  double lo = 0.5 + 1e-15;
  double hi = std::numbers::sqrt2 / 2.0 + 1e-12;
  for (int it = 0; it < kMaxBisections && hi - lo > tol; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (below_critical(n, mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (hi - lo > tol) {
    throw NumericalError(NumericalError::Kind::ToleranceNotReached,
                         "polynomial-root bisection stalled at width " +
                             std::to_string(hi - lo));
  }
  CriticalPoint cp;
  cp.n = n;
  cp.lambda_c = 0.5 * (lo + hi);
  cp.method = CriticalMethod::PolyRoot;
  cp.bracket_width = hi - lo;
  return cp;
}

CriticalPoint critical_lambda(IntervalRadius n, double tol) {
  require_tolerance(tol);
  auto lambda_width = [](const SigmaBracket& b) { return 1.0 / b.lo - 1.0 / b.hi; };
  SigmaBracket b = bisect_sigma_max(
      n, [&](const SigmaBracket& br) { return br.lo > 0.0 && lambda_width(br) <= tol; });
  if (!(b.lo > 0.0) || lambda_width(b) > tol) {
    throw NumericalError(NumericalError::Kind::ToleranceNotReached,
                         "sigma_max bisection could not resolve lambda_c to tol");
  }
  CriticalPoint cp;
  cp.n = n;
  cp.lambda_c = 2.0 / (b.lo + b.hi);
  cp.method = CriticalMethod::SturmEigen;
  cp.bracket_width = lambda_width(b);

  CriticalPoint check = critical_lambda_poly(n, tol);
  cp.residual = std::abs(cp.lambda_c - check.lambda_c);
  if (cp.residual > 10.0 * tol) {
    throw NumericalError(
        NumericalError::Kind::MethodDisagreement,
        "lambda_c(" + std::to_string(n.value()) + "): sturm and polynomial routes differ by " +
            std::to_string(cp.residual));
  }
  return cp;
}

double malthusian_parameter(IntervalRadius n, BirthRate lambda, double tol) {
  return lambda.value() * spectral_radius_c(n, tol) - 1.0;
}

int critical_n(BirthRate lambda, double tol) {
  const double l = lambda.value();
  if (!(l > 0.5)) {
    throw InvalidArgument(
        "critical_n requires lambda > 1/2; no finite interval survives otherwise");
  }
  auto supercritical = [&](long long n) {
    return l > critical_lambda(IntervalRadius(n), tol).lambda_c;
  };
  if (supercritical(1)) return 1;
  long long lo = 1;  // l <= lambda_c(lo)
  long long hi = 2;
  while (!supercritical(hi)) {
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    long long mid = lo + (hi - lo) / 2;
    if (supercritical(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return static_cast<int>(hi);
}

PhaseRow phase_row(IntervalRadius n, double tol) {
  CriticalPoint cp = critical_lambda(n, tol);
  const double nn = static_cast<double>(n.value());
  return PhaseRow{n.value(), cp.lambda_c, nn * nn * (2.0 * cp.lambda_c - 1.0)};
}

std::vector<PhaseRow> phase_table(int n_max, double tol, unsigned threads) {
  if (n_max < 1) throw InvalidArgument("phase table needs n_max >= 1");
  require_tolerance(tol);
  std::vector<PhaseRow> rows(static_cast<std::size_t>(n_max));
  parallel_for(rows.size(), threads, [&](std::size_t i) {
    rows[i] = phase_row(IntervalRadius(static_cast<long long>(i) + 1), tol);
  });
  return rows;
}

}  // namespace brw
