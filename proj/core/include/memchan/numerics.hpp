#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "memchan/error.hpp"

namespace memchan {

inline constexpr double kLog2E = 1.4426950408889634074;

/// Normalized probability vector. Entries in [-1e-12, 0) are clipped to zero;
/// anything more negative, or a total mass off by more than 1e-9, is rejected.
class ProbDist {
 public:
  ProbDist() = default;
  explicit ProbDist(std::vector<double> values);

  /// Rescales nonnegative weights to unit mass.
  static ProbDist from_weights(std::vector<double> weights);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
};

enum class LogBase { Two, E };

/// -sum p log p with 0 log 0 = 0.
double shannon_entropy(const ProbDist& p, LogBase base = LogBase::Two);

/// Same as shannon_entropy but over raw nonnegative weights already summing to one.
double shannon_entropy_unchecked(std::span<const double> p, LogBase base = LogBase::Two);

/// Finite-n coherent information n log2 d - S for a dephasing memory channel.
double coherent_info_bits(int n, int d, double s_diag_bits);

struct Sample {
  double x;
  double y;
};

struct FitLine {
  double slope = 0.0;
  double intercept = 0.0;
  double max_abs_residual = 0.0;
  std::vector<double> window;
};

/// Least-squares S_n ~ slope * n + intercept; slope estimates the entropy rate.
FitLine entropy_rate_estimate(std::span<const Sample> points);

struct DecayFit {
  double log_amplitude = 0.0;
  double rate = 0.0;
  std::optional<double> poly_exponent;
  double r_squared = 0.0;
};

/// Regresses ln y on s. All y must be strictly positive.
DecayFit fit_exponential_decay(std::span<const Sample> points);

struct PrefactorSample {
  double s;
  double l;
  double y;
};

/// Regresses ln y = log_amplitude + rate * s + poly_exponent * ln l.
/// Falls back to the plain fit when all l coincide.
DecayFit fit_decay_with_prefactor(std::span<const PrefactorSample> points);

struct RootResult {
  double x = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

RootResult find_root_bisect(const std::function<double(double)>& f, double a, double b, double tol);

struct PerronResult {
  double lambda = 0.0;
  Eigen::VectorXd left;
  Eigen::VectorXd right;
};

/// Perron eigenpair of an entrywise-positive square matrix, left.dot(right) == 1.
PerronResult perron_eigen(const Eigen::MatrixXd& m);

/// Sum of |eigenvalues| of the Hermitian part of m.
double trace_norm_hermitian(const Eigen::MatrixXcd& m);

}  // namespace memchan
