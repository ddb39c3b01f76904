#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "memchan/numerics.hpp"

namespace memchan::markov {

/// Column-stochastic transition matrix: p_i(s+1) = sum_j M(i,j) p_j(s).
/// Row-stochastic input is rejected, never transposed.
class StochasticMatrix {
 public:
  explicit StochasticMatrix(Eigen::MatrixXd entries);

  /// Builds from a list of d columns, each holding d transition probabilities.
  static StochasticMatrix from_columns(const std::vector<std::vector<double>>& columns);

  int d() const noexcept { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& matrix() const noexcept { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

 private:
  Eigen::MatrixXd m_;
};

struct CapacityReport {
  ProbDist stationary;
  std::vector<double> column_entropies;  // bits
  double entropy_rate_bits = 0.0;
  double capacity_bits = 0.0;
};

/// Strong connectivity of the graph with an edge j -> i whenever M(i,j) > 0.
bool check_irreducible(const StochasticMatrix& m);

ProbDist stationary(const StochasticMatrix& m);

/// sum_i v_i H_i in bits.
double entropy_rate(const StochasticMatrix& m);

CapacityReport capacity(const StochasticMatrix& m);

/// Exact entropy (bits) of the length-n path distribution by enumerating all d^n paths.
/// p0 defaults to the stationary vector. Requires n log2 d <= 24.
double brute_force_diag_entropy(const StochasticMatrix& m, const std::optional<ProbDist>& p0, int n);

}  // namespace memchan::markov
