#pragma once

#include <span>
#include <vector>

#include "brw/model.hpp"

namespace brw {

/// M_N(t) = exp(A_N t). Entry (j,k) is the mean number of type-k
/// individuals at time t descended from one type-j individual at time 0.
struct MeanMatrix {
  IntervalRadius n{1};
  BirthRate lambda{0.0};
  double t = 0.0;
  std::vector<double> entries;  // row-major, (N+1) x (N+1)

  int size() const noexcept { return n.types(); }
  double operator()(int j, int k) const {
    return entries[static_cast<std::size_t>(j) * size() + k];
  }
};

struct MeanCurve {
  std::vector<double> times;
  std::vector<double> expected_total;
};

/// Spectral decomposition of A_N reused across time points. A_N is similar
/// to the symmetric tridiagonal -I + lambda*S, so exp(A_N t) is assembled
/// from S's eigenpairs and the diagonal similarity.
class MeanSemigroup {
 public:
  MeanSemigroup(IntervalRadius n, BirthRate lambda);

  IntervalRadius radius() const noexcept { return n_; }
  BirthRate birth_rate() const noexcept { return lambda_; }

  /// Eigenvalues of A_N in ascending order.
  std::span<const double> growth_rates() const noexcept { return rates_; }

  MeanMatrix matrix(double t) const;

  /// Row sum of M(t) for initial type j. Types already merge sites +-k.
  double expected_total(double t, int initial_type) const;
  /// log of expected_total, evaluated without forming exp(rate * t).
  double log_expected_total(double t, int initial_type) const;

 private:
  IntervalRadius n_;
  BirthRate lambda_;
  std::vector<double> rates_;
  std::vector<double> vectors_;  // column i = eigenvector for rates_[i]
  std::vector<double> scale_;    // D = diag(1, sqrt2, ...)
  // row_weight_[j*(N+1)+i] = sum_k V(j,i) V(k,i) d_k / d_j
  std::vector<double> row_weight_;

  void check_type(int j) const;
};

MeanMatrix mean_matrix(IntervalRadius n, BirthRate lambda, double t);

double expected_total(IntervalRadius n, BirthRate lambda, double t,
                      int initial_type);

MeanCurve mean_curve(IntervalRadius n, BirthRate lambda,
                     std::span<const double> times, int initial_type);

/// a0 * exp((2 lambda - 1) t): mean size of the unrestricted walk on Z.
double unrestricted_mean_total(BirthRate lambda, double t, double a0);

}  // namespace brw
