#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace memchan::spin {

/// H = -sum Z_i Z_{i+1} - g sum X_i
struct TransverseIsing {
  double g = 1.0;
};

/// H = sum 2(g^2-1) Z_i Z_{i+1} - (1+g)^2 X_i + (g-1)^2 Z_{i-1} X_i Z_{i+1}
struct WolfModel {
  double g = 1.0;
};

/// H = zz sum Z_i Z_{i+1} + x sum X_i + zxz sum Z_{i-1} X_i Z_{i+1} + z sum Z_i
struct LocalTerms {
  double zz = 0.0;
  double x = 0.0;
  double zxz = 0.0;
  double z = 0.0;
};

using Model = std::variant<TransverseIsing, WolfModel, LocalTerms>;

struct SpinChainSpec {
  int n = 4;
  bool periodic = true;
  Model model = TransverseIsing{};
};

inline constexpr int kMinSpins = 4;
inline constexpr int kMaxSpins = 18;
inline constexpr int kMaxDenseSpins = 10;

void validate(const SpinChainSpec& spec);

LocalTerms local_terms(const Model& model);

/// True when the global flip prod_i X_i commutes with H.
bool has_spin_flip_symmetry(const Model& model);

/// Matrix-free H psi in the Z basis; site 0 is the most significant bit.
Eigen::VectorXcd apply_hamiltonian(const SpinChainSpec& spec, const Eigen::VectorXcd& psi);

/// Dense H for n <= 10, used as a cross-check.
Eigen::MatrixXd dense_hamiltonian(const SpinChainSpec& spec);

struct SolverOptions {
  double tol = 1e-10;
  int max_iter = 4000;  // Hamiltonian applications per sector
  int krylov_dim = 64;
  std::uint64_t seed = 42;
};

struct GroundStateResult {
  double energy = 0.0;
  Eigen::VectorXcd amplitudes;
  double residual = 0.0;
  double gap_estimate = 0.0;
  bool degenerate_flag = false;
  bool converged = false;
  int iterations = 0;
  /// Ground vector of the opposite flip sector when it is degenerate with `amplitudes`.
  std::optional<Eigen::VectorXcd> partner;
};

/// Restarted Lanczos with full reorthogonalization from a seeded start vector.
/// Flip-symmetric models are solved per sector; on a tie the even sector wins.
/// Non-convergence is reported through `converged` and `residual`.
GroundStateResult ground_state(const SpinChainSpec& spec, const SolverOptions& opts = {});

double diag_entropy_bits(const Eigen::VectorXcd& amplitudes);
double diag_entropy_bits(const GroundStateResult& state);

struct CapacityPoint {
  int n = 0;
  double g = 0.0;
  double capacity_bits = 0.0;
  double diag_entropy_bits = 0.0;
  double energy = 0.0;
  double gap_estimate = 0.0;
  bool degenerate = false;
  double residual = 0.0;
  bool converged = false;
  std::string error;  // non-empty when the point failed
};

/// 1 - S(Diag)/n for the ground state of `spec`.
CapacityPoint capacity_point(const SpinChainSpec& spec, const SolverOptions& opts = {});

enum class ModelKind { TransverseIsing, Wolf };

/// Evaluates every (n, g) pair, n-major, in grid order regardless of `jobs`.
std::vector<CapacityPoint> sweep(ModelKind model, const std::vector<double>& g_values,
                                 const std::vector<int>& n_values, const SolverOptions& opts = {},
                                 bool periodic = true, int jobs = 1);

struct WolfCrossCheck {
  double overlap = 0.0;
  double entropy_gap = 0.0;
  bool degenerate = false;
};

/// Compares the ED ground state of the Wolf Hamiltonian with the periodic MPS built from wolf_mps(g).
WolfCrossCheck wolf_cross_check(int n, double g, const SolverOptions& opts = {});

}  // namespace memchan::spin
