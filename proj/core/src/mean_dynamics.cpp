#include "brw/mean_dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "brw/spectral.hpp"

namespace brw {

namespace {

void require_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw InvalidArgument("time must be finite and >= 0");
  }
}

}  // namespace

MeanSemigroup::MeanSemigroup(IntervalRadius n, BirthRate lambda)
    : n_(n), lambda_(lambda), scale_(symmetrizer_diagonal(n)) {
  const int s = n.types();
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(s);
  std::vector<double> off = symmetrized_offdiagonal(n);
  Eigen::VectorXd sub = Eigen::Map<const Eigen::VectorXd>(off.data(), s - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);

  rates_.resize(s);
  vectors_.resize(static_cast<std::size_t>(s) * s);
  for (int i = 0; i < s; ++i) {
    rates_[i] = -1.0 + lambda.value() * solver.eigenvalues()(i);
    for (int j = 0; j < s; ++j) {
      vectors_[static_cast<std::size_t>(j) * s + i] = solver.eigenvectors()(j, i);
    }
  }

  row_weight_.assign(static_cast<std::size_t>(s) * s, 0.0);
  for (int j = 0; j < s; ++j) {
    for (int i = 0; i < s; ++i) {
      double acc = 0.0;
      for (int k = 0; k < s; ++k) {
        acc += vectors_[static_cast<std::size_t>(k) * s + i] * scale_[k];
      }
      row_weight_[static_cast<std::size_t>(j) * s + i] =
          vectors_[static_cast<std::size_t>(j) * s + i] * acc / scale_[j];
    }
  }
}

void MeanSemigroup::check_type(int j) const {
  if (j < 0 || j > n_.value()) {
    throw InvalidArgument("initial type " + std::to_string(j) +
                          " outside 0.." + std::to_string(n_.value()));
  }
}

MeanMatrix MeanSemigroup::matrix(double t) const {
  require_time(t);
  const int s = n_.types();
  std::vector<double> growth(s);
  for (int i = 0; i < s; ++i) growth[i] = std::exp(rates_[i] * t);

  MeanMatrix m{n_, lambda_, t, std::vector<double>(static_cast<std::size_t>(s) * s)};
  for (int j = 0; j < s; ++j) {
    for (int k = 0; k < s; ++k) {
      double acc = 0.0;
      double magnitude = 0.0;
      for (int i = 0; i < s; ++i) {
        double term = vectors_[static_cast<std::size_t>(j) * s + i] * growth[i] *
                      vectors_[static_cast<std::size_t>(k) * s + i];
        acc += term;
        magnitude += std::abs(term);
      }
      // Cancellation can leave a negative rounding residue where the true
      // entry is ~0; only that residue is clamped.
      if (acc < 0.0 && -acc <= 64.0 * s * 0x1p-52 * magnitude) acc = 0.0;
      m.entries[static_cast<std::size_t>(j) * s + k] = acc * scale_[k] / scale_[j];
    }
  }
  return m;
}

double MeanSemigroup::log_expected_total(double t, int initial_type) const {
  require_time(t);
  check_type(initial_type);
  const int s = n_.types();
  const double top = rates_.back();
  double acc = 0.0;
  for (int i = 0; i < s; ++i) {
    acc += row_weight_[static_cast<std::size_t>(initial_type) * s + i] *
           std::exp((rates_[i] - top) * t);
  }
  return top * t + std::log(acc);
}

double MeanSemigroup::expected_total(double t, int initial_type) const {
  return std::exp(log_expected_total(t, initial_type));
}

MeanMatrix mean_matrix(IntervalRadius n, BirthRate lambda, double t) {
  return MeanSemigroup(n, lambda).matrix(t);
}

double expected_total(IntervalRadius n, BirthRate lambda, double t,
                      int initial_type) {
  return MeanSemigroup(n, lambda).expected_total(t, initial_type);
}

MeanCurve mean_curve(IntervalRadius n, BirthRate lambda,
                     std::span<const double> times, int initial_type) {
  MeanSemigroup semigroup(n, lambda);
  MeanCurve curve;
  curve.times.assign(times.begin(), times.end());
  curve.expected_total.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw InvalidArgument("mean curve times must be strictly increasing");
    }
    curve.expected_total.push_back(semigroup.expected_total(times[i], initial_type));
  }
  return curve;
}

double unrestricted_mean_total(BirthRate lambda, double t, double a0) {
  require_time(t);
  if (!(a0 >= 0.0)) throw InvalidArgument("initial count must be >= 0");
  return a0 * std::exp((2.0 * lambda.value() - 1.0) * t);
}

}  // namespace brw
