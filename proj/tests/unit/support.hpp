#pragma once

#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "memchan/error.hpp"

#define CHECK_ERROR_KIND(expr, k)              \
  do {                                         \
    bool thrown_ = false;                      \
    try {                                      \
      (void)(expr);                            \
    } catch (const memchan::Error& e_) {       \
      thrown_ = true;                          \
      CHECK(e_.kind() == (k));                 \
    }                                          \
    CHECK_MESSAGE(thrown_, "expected " #k);    \
  } while (0)

namespace testing {

inline std::mt19937_64& rng(std::uint64_t seed) {
  static thread_local std::mt19937_64 g;
  g.seed(seed);
  return g;
}

inline double uniform(std::mt19937_64& g, double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(g);
}

/// Reduced density matrix of `sites` from a dense state vector on n qudits of
/// dimension d, site 0 most significant.
inline Eigen::MatrixXcd dense_partial_trace(const Eigen::VectorXcd& psi, int n, int d, const std::vector<int>& sites) {
  const int k = static_cast<int>(sites.size());
  long kept_dim = 1;
  for (int i = 0; i < k; ++i) kept_dim *= d;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(kept_dim, kept_dim);
  std::vector<bool> keep(static_cast<std::size_t>(n), false);
  for (int s : sites) keep[static_cast<std::size_t>(s)] = true;
  const long total = psi.size();
  std::vector<long> kept_idx(static_cast<std::size_t>(total)), rest_idx(static_cast<std::size_t>(total));
  for (long x = 0; x < total; ++x) {
    long rem = x;
    std::vector<int> digits(static_cast<std::size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
      digits[static_cast<std::size_t>(i)] = static_cast<int>(rem % d);
      rem /= d;
    }
    long a = 0;
    for (int s : sites) a = a * d + digits[static_cast<std::size_t>(s)];
    long b = 0;
    for (int i = 0; i < n; ++i)
      if (!keep[static_cast<std::size_t>(i)]) b = b * d + digits[static_cast<std::size_t>(i)];
    kept_idx[static_cast<std::size_t>(x)] = a;
    rest_idx[static_cast<std::size_t>(x)] = b;
  }
  const long rest_dim = total / kept_dim;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(kept_dim, rest_dim);
  for (long x = 0; x < total; ++x) m(kept_idx[static_cast<std::size_t>(x)], rest_idx[static_cast<std::size_t>(x)]) = psi(x);
  rho = m * m.adjoint();
  return rho;
}

}  // namespace testing
