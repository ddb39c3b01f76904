#pragma once

#include <Eigen/Dense>

namespace memchan::ising {

/// Classical Ising chain H = -sum (J - D) s_i s_{i+1} - M s_i, s = +-1.
/// D only shifts the coupling; beta is an explicit parameter everywhere.
struct IsingParams {
  double beta = 1.0;
  double J = 0.0;
  double M = 0.0;
  double D = 0.0;

  double coupling() const noexcept { return J - D; }
};

void validate(const IsingParams& p);

struct TransferMatrix2 {
  Eigen::Matrix2d t;
  /// Exponents e_ij with t(i,j) = exp(beta * e_ij).
  Eigen::Matrix2d energies;
};

/// Throws ParameterOverflow when any |beta * e_ij| exceeds 700.
TransferMatrix2 transfer_matrix(const IsingParams& p);

/// Thermodynamic entropy per site in nats, (1 - beta d/dbeta) ln lambda_1.
double entropy_per_site(const IsingParams& p);

/// Exact entropy per site (nats) of a periodic chain of n spins from
/// ln(lambda_1^n + lambda_2^n).
double entropy_per_site_finite(const IsingParams& p, int n);

/// 1 - log2(e) * entropy_per_site, in bits per channel use.
double capacity(const IsingParams& p);

/// Total Boltzmann entropy (nats) by enumerating all 2^n configurations, n <= 18.
double brute_force_entropy(const IsingParams& p, int n, bool periodic);

}  // namespace memchan::ising
