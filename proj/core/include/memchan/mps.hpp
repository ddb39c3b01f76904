#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "memchan/ising.hpp"
#include "memchan/numerics.hpp"

namespace memchan::mps {

/// Translation-invariant MPS with periodic trace boundary:
/// psi(x_0 ... x_{N-1}) = tr(Q_{x_0} ... Q_{x_{N-1}}).
/// Basis indices put site 0 in the most significant digit.
class MPSSpec {
 public:
  explicit MPSSpec(std::vector<Eigen::MatrixXcd> matrices);

  int d() const noexcept { return static_cast<int>(q_.size()); }
  int bond() const noexcept { return static_cast<int>(q_.front().rows()); }
  const std::vector<Eigen::MatrixXcd>& matrices() const noexcept { return q_; }
  const Eigen::MatrixXcd& operator[](int k) const { return q_[static_cast<std::size_t>(k)]; }

 private:
  std::vector<Eigen::MatrixXcd> q_;
};

/// Doubled transfer operator M = sum_k Q_k (x) conj(Q_k) and its per-symbol terms.
struct TransferOp {
  Eigen::MatrixXcd matrix;
  std::vector<Eigen::MatrixXcd> terms;
};

TransferOp transfer_operator(const MPSSpec& spec);

/// C(N) = tr(M^N) from the eigenvalues of M.
std::complex<double> normalization(const MPSSpec& spec, int n);

/// Dephased string distribution p_x = tr(A_{x_1} ... A_{x_N}) / C(N), d^N <= 2^20.
ProbDist diag_distribution(const MPSSpec& spec, int n);

double diag_entropy_bits(const MPSSpec& spec, int n);

/// Normalized amplitudes of the periodic MPS state on n sites.
Eigen::VectorXcd state_vector(const MPSSpec& spec, int n);

/// Parameters of a rank-1 MPS: a, b the nonzero eigenvalues of A = Q_0 (x) conj(Q_0)
/// and B, and c = tr(A B) / (a b).
struct Rank1Params {
  double a = 1.0;
  double b = 1.0;
  double c = 1.0;
};

Rank1Params rank1_params(const MPSSpec& spec);

/// Bond-2 MPS whose dephased weights are the canonical matrices
/// A = [[a, sqrt(cab)], [0, 0]], B = [[0, 0], [sqrt(cab), b]].
MPSSpec canonical_rank1(const Rank1Params& p);

/// Effective Ising chain at beta = 1 reproducing a^l b^(N-l) c^K. Here K counts
/// A->B boundaries on the ring, so a domain wall pair costs c and
/// J - D = -ln(c)/4, M = ln(a/b)/2. Throws DeterministicLimit for c == 0.
ising::IsingParams ising_from_rank1(const Rank1Params& p);

/// Regularized capacity (bits) of a rank-1 MPS environment; exactly 1 when c == 0.
double capacity_rank1(const Rank1Params& p);

/// Ground state of H = sum 2(g^2-1) ZZ - (1+g)^2 X + (g-1)^2 ZXZ:
/// Q_0 = [[0,0],[1,1]], Q_1 = [[1,g],[0,0]].
MPSSpec wolf_mps(double g);

double wolf_capacity(double g);

struct TransferSpectrum {
  std::vector<std::complex<double>> eigenvalues;  // of M / lambda_1, by descending modulus
  std::vector<double> moduli;                     // descending, moduli[0] == 1
  double lambda1 = 0.0;                           // spectral radius of M
  double gap = 0.0;                               // 1 - moduli[1]
  bool unique_fixed_point = true;
};

/// Eigenvalues within unit_tol of modulus 1 count towards the fixed-point multiplicity.
TransferSpectrum transfer_spectrum(const MPSSpec& spec, double unit_tol = 1e-6);

struct BlockLayout {
  int l = 1;  // live block length
  int s = 0;  // spacer length
  int v = 1;  // number of sections
  int N = 1;  // periodic chain length

  /// First site of live block i.
  int block_start(int i) const noexcept { return i * (l + s); }
};

void validate(const BlockLayout& layout);

/// Exact reduced density matrix of the given (distinct) sites of a periodic
/// chain of n sites. Retained Hilbert space dimension is capped at 4096.
Eigen::MatrixXcd reduced_density(const MPSSpec& spec, int n, std::span<const int> sites);

/// Reduced state of the selected live blocks; remaining sites traced out.
Eigen::MatrixXcd reduced_block_density(const MPSSpec& spec, const BlockLayout& layout,
                                       std::span<const int> which);

/// || rho_{L_1 ... L_v} - (rho^l_N)^{(x) v} ||_1
double block_product_deviation(const MPSSpec& spec, const BlockLayout& layout);

/// || rho^l_{l+delta} - rho^l_{n_big} ||_1, l <= 10.
double longshort_deviation(const MPSSpec& spec, int l, int delta, int n_big);

}  // namespace memchan::mps
