#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "brw/model.hpp"

namespace brw {

inline constexpr double kDefaultTolerance = 1e-12;

/// Floating value held as sign * mantissa * 2^exponent, with mantissa in
/// [0.5, 1) (or exactly 0). Used for characteristic polynomials whose
/// magnitude leaves the double range for large N.
struct ScaledValue {
  int sign = 0;
  double mantissa = 0.0;
  long long exponent = 0;

  /// Natural log of |value|; -inf for zero.
  double log_abs() const;
  /// Collapses to a double; may overflow to +-inf or underflow to 0.
  double to_double() const;
};

/// f_N(x) = det(xI - A_N) via the three-term recurrence, renormalised every
/// step so the result never overflows.
ScaledValue char_poly_eval_scaled(IntervalRadius n, BirthRate lambda, double x);

/// Same as char_poly_eval_scaled, collapsed to a double.
double char_poly_eval(IntervalRadius n, BirthRate lambda, double x);

/// Tridiagonal generator A_N of the mean semigroup on types 0..N
/// (type = distance from the origin). Stored by bands; A_N = -I + lambda*C_N.
class GeneratorMatrix {
 public:
  GeneratorMatrix(IntervalRadius n, BirthRate lambda);

  IntervalRadius radius() const noexcept { return n_; }
  BirthRate birth_rate() const noexcept { return lambda_; }
  int size() const noexcept { return n_.types(); }

  /// Entry a(j,k) for 0 <= j,k <= N.
  double operator()(int j, int k) const;
  /// Entry of C_N, i.e. a(j,k) with the -I removed and lambda factored out.
  static double coefficient(int j, int k);

  /// Row-major dense copy, size() x size().
  std::vector<double> dense() const;

 private:
  IntervalRadius n_;
  BirthRate lambda_;
};

GeneratorMatrix build_generator(IntervalRadius n, BirthRate lambda);

/// Symmetric tridiagonal matrix similar to C_N under D = diag(1, sqrt2, ...,
/// sqrt2): zero diagonal, off-diagonals (sqrt2, 1, 1, ..., 1).
/// Returns the N off-diagonal entries.
std::vector<double> symmetrized_offdiagonal(IntervalRadius n);

/// Diagonal of the similarity D with D C_N D^{-1} symmetric.
std::vector<double> symmetrizer_diagonal(IntervalRadius n);

/// Count of eigenvalues of the symmetrised C_N strictly below x (Sturm
/// sequence / LDL^T inertia).
int count_eigenvalues_below(IntervalRadius n, double x);

/// Largest eigenvalue of C_N by Sturm bisection, bracket width <= tol.
/// Throws NumericalError(ToleranceNotReached) if the bracket cannot shrink
/// to tol in double precision.
double spectral_radius_c(IntervalRadius n, double tol = kDefaultTolerance);

enum class CriticalMethod { SturmEigen, PolyRoot };
std::string_view to_string(CriticalMethod m);
CriticalMethod critical_method_from_string(std::string_view s);

struct CriticalPoint {
  IntervalRadius n{1};
  double lambda_c = 0.0;
  CriticalMethod method = CriticalMethod::SturmEigen;
  /// |sturm - polynomial| disagreement between the two routes.
  double residual = 0.0;
  /// Width of the final bisection bracket in lambda.
  double bracket_width = 0.0;
};

/// Smallest lambda at which A_N is singular, located by bisection in lambda
/// on the sign pattern of the leading minors f_0(0), ..., f_N(0). Independent
/// of the Sturm route; exposed for cross-checks.
CriticalPoint critical_lambda_poly(IntervalRadius n,
                                   double tol = kDefaultTolerance);

/// lambda_c(N) = 1 / sigma_max(C_N), cross-checked against the polynomial
/// route. Throws NumericalError(MethodDisagreement) if they differ by more
/// than 10*tol.
CriticalPoint critical_lambda(IntervalRadius n, double tol = kDefaultTolerance);

/// Top eigenvalue of A_N: lambda * sigma_max(C_N) - 1.
double malthusian_parameter(IntervalRadius n, BirthRate lambda,
                            double tol = kDefaultTolerance);

/// Least N with lambda > lambda_c(N). Requires lambda > 1/2.
int critical_n(BirthRate lambda, double tol = kDefaultTolerance);

struct PhaseRow {
  int n = 0;
  double lambda_c = 0.0;
  /// n^2 * (2 lambda_c - 1)
  double scaled_gap = 0.0;
};

/// Rows n = 1..n_max ordered by n. threads = 0 picks the hardware count.
std::vector<PhaseRow> phase_table(int n_max, double tol = kDefaultTolerance,
                                  unsigned threads = 0);

PhaseRow phase_row(IntervalRadius n, double tol = kDefaultTolerance);

}  // namespace brw
