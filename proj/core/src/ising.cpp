#include "memchan/ising.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "memchan/numerics.hpp"

namespace memchan::ising {

namespace {
constexpr double kMaxExponent = 700.0;
}

void validate(const IsingParams& p) {
  require(std::isfinite(p.beta) && p.beta > 0.0, "beta must be positive and finite");
  require(std::isfinite(p.J) && std::isfinite(p.M) && std::isfinite(p.D), "couplings must be finite");
}

TransferMatrix2 transfer_matrix(const IsingParams& p) {
  validate(p);
  const double k = p.coupling();
  TransferMatrix2 out;
  out.energies << k + p.M, -k, -k, k - p.M;
  const Eigen::Matrix2d expo = p.beta * out.energies;
  if (expo.cwiseAbs().maxCoeff() > kMaxExponent) {
    fail(ErrorKind::ParameterOverflow, "beta * energy exceeds " + std::to_string(kMaxExponent));
  }
  out.t = expo.array().exp().matrix();
  return out;
}

double entropy_per_site(const IsingParams& p) {
  const TransferMatrix2 tm = transfer_matrix(p);
  // Rescale by the largest entry; the log-derivative ratio is scale invariant.
  const double shift = (p.beta * tm.energies).maxCoeff();
  const Eigen::Matrix2d scaled = (p.beta * tm.energies.array() - shift).exp().matrix();
  const PerronResult pe = perron_eigen(scaled);
  // Hellmann-Feynman: d ln(lambda)/d beta = l.(dT/d beta).r / (lambda l.r), dT_ij/d beta = e_ij T_ij
  const Eigen::Matrix2d dt = tm.energies.cwiseProduct(scaled);
  const double dlog = pe.left.dot(dt * pe.right) / (pe.lambda * pe.left.dot(pe.right));
  const double s = (shift + std::log(pe.lambda)) - p.beta * dlog;
  return std::clamp(s, 0.0, std::log(2.0));
}

double entropy_per_site_finite(const IsingParams& p, int n) {
  require(n >= 1, "chain length must be >= 1");
  const TransferMatrix2 tm = transfer_matrix(p);
  const double shift = (p.beta * tm.energies).maxCoeff();
  const Eigen::Matrix2d scaled = (p.beta * tm.energies.array() - shift).exp().matrix();
  const Eigen::Matrix2d dt = tm.energies.cwiseProduct(scaled);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(scaled);
  // eigenvalues ascending; lambda_2 may be negative
  const double l1 = es.eigenvalues()(1);
  const double l2 = es.eigenvalues()(0);
  const Eigen::Vector2d v1 = es.eigenvectors().col(1);
  const Eigen::Vector2d v2 = es.eigenvectors().col(0);
  const double d1 = v1.dot(dt * v1);
  const double d2 = v2.dot(dt * v2);
  const double r = l2 / l1;
  const double rn = std::pow(r, n);
  // ln Z / n = shift + ln l1 + ln(1 + r^n)/n
  const double lnz = shift + std::log(l1) + std::log1p(rn) / n;
  // d/dbeta [ln Z / n] = (l1^{n-1} d1 + l2^{n-1} d2) / (l1^n + l2^n)
  const double dlnz = (d1 / l1 + std::pow(r, n - 1) * d2 / l1) / (1.0 + rn);
  const double s = lnz - p.beta * dlnz;
  return std::clamp(s, 0.0, std::log(2.0));
}

double capacity(const IsingParams& p) {
  return std::clamp(1.0 - kLog2E * entropy_per_site(p), 0.0, 1.0);
}

double brute_force_entropy(const IsingParams& p, int n, bool periodic) {
  validate(p);
  require(n >= 1, "chain length must be >= 1");
  if (n > 18) fail(ErrorKind::EnumerationTooLarge, "2^" + std::to_string(n) + " configurations");
  const double k = p.coupling();
  const std::size_t count = std::size_t{1} << n;
  std::vector<double> logw(count);
  for (std::size_t c = 0; c < count; ++c) {
    double minus_e = 0.0;
    for (int i = 0; i < n; ++i) {
      const double si = ((c >> i) & 1U) ? -1.0 : 1.0;
      minus_e += p.M * si;
      if (i + 1 < n || (periodic && n > 1)) {
        const int j = (i + 1) % n;
        const double sj = ((c >> j) & 1U) ? -1.0 : 1.0;
        minus_e += k * si * sj;
      }
    }
    logw[c] = p.beta * minus_e;
  }
  const double top = *std::max_element(logw.begin(), logw.end());
  double z = 0.0;
  for (double lw : logw) z += std::exp(lw - top);
  const double log_z = top + std::log(z);
  double s = 0.0;
  for (double lw : logw) {
    const double lp = lw - log_z;
    s -= std::exp(lp) * lp;
  }
  return std::max(s, 0.0);
}

}  // namespace memchan::ising
