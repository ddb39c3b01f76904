#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "memchan/numerics.hpp"

namespace memchan::gaussian {

/// Symmetric positive-definite potential matrix of H = (p.p + x.V.x) / 2.
/// Entries vanish for (ring) distance |i - j| >= bandwidth / 2.
class PotentialMatrix {
 public:
  PotentialMatrix(Eigen::MatrixXd v, int bandwidth, bool periodic);

  int n() const noexcept { return static_cast<int>(v_.rows()); }
  int bandwidth() const noexcept { return bandwidth_; }
  bool periodic() const noexcept { return periodic_; }
  const Eigen::MatrixXd& matrix() const noexcept { return v_; }

 private:
  Eigen::MatrixXd v_;
  int bandwidth_;
  bool periodic_;
};

/// V_ii = 1 + 2 kappa, V_{i,i+-1} = -kappa (ring when periodic), bandwidth 3.
PotentialMatrix harmonic_chain(int n, double kappa, bool periodic = true);

/// Second moments gamma_jk = 2 Re tr(R_j R_k rho), ordering (x_1..x_m, p_1..p_m), hbar = 1.
class CovarianceMatrix {
 public:
  explicit CovarianceMatrix(Eigen::MatrixXd gamma);

  int modes() const noexcept { return static_cast<int>(gamma_.rows() / 2); }
  const Eigen::MatrixXd& matrix() const noexcept { return gamma_; }

 private:
  Eigen::MatrixXd gamma_;
};

struct SymplecticSpectrum {
  std::vector<double> mu;  // descending, each >= 1 - 1e-8
};

/// gamma = V^{-1/2} (+) V^{1/2}.
CovarianceMatrix ground_covariance(const PotentialMatrix& v);

/// Principal submatrix on the x and p rows of `sites`.
CovarianceMatrix reduce(const CovarianceMatrix& gamma, std::span<const int> sites);

/// Positive halves of the paired spectrum of i gamma sigma.
SymplecticSpectrum symplectic_eigenvalues(const CovarianceMatrix& gamma);

/// f(x) = (x+1)/2 log2((x+1)/2) - (x-1)/2 log2((x-1)/2), f(1) = 0.
double mode_entropy(double mu);

/// von Neumann entropy in bits.
double entropy(const CovarianceMatrix& gamma);

/// Nonzero root of (k+2) log2(k+2) + k log2 k = 2 (about 0.17623008).
double fannes_threshold();

struct FannesBound {
  double bound_fine = 0.0;
  double bound_coarse = 0.0;
  bool applicable = false;
};

/// Fannes-type bound on |S_1 - S_2| from paired symplectic spectra (both sorted descending).
FannesBound fannes_gaussian_bound(const SymplecticSpectrum& mu1, const SymplecticSpectrum& mu2);

struct MutualInfo {
  double i_nats = 0.0;
  double trace_bound = 0.0;  // sqrt(2 I) >= || rho_AB - rho_A (x) rho_B ||_1
};

/// Evaluated in quad precision so that correlations far below 1e-16 survive the
/// cancellation S(A) + S(B) - S(AB).
MutualInfo mutual_info_and_trace_bound(const CovarianceMatrix& gamma, std::span<const int> a,
                                       std::span<const int> b);

struct ExperimentRow {
  double abscissa = 0.0;
  double value = 0.0;             // decaying quantity that is fitted
  double mutual_info_nats = 0.0;  // separation rows
  double entropy_bound = 0.0;     // longshort rows: Fannes-type fine bound (NaN when not applicable)
  double entropy_diff = 0.0;      // longshort rows: |S_1 - S_2| in bits
};

struct DecayExperiment {
  std::vector<ExperimentRow> rows;
  std::optional<DecayFit> fit;
  bool degenerate = false;  // every value vanished; no fit possible
};

/// Two L-blocks separated by d sites in a periodic ground-state chain of n_total
/// oscillators; fits sqrt(2 I_AB) against d.
DecayExperiment theorem1_decay_experiment(double kappa, int block, const std::vector<int>& separations, int n_total);

/// First l sites of chains of length l + delta and n_big; fits the operator-norm
/// covariance difference against delta.
DecayExperiment longshort_covariance_experiment(double kappa, int l, const std::vector<int>& deltas, int n_big);

}  // namespace memchan::gaussian
