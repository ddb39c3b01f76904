#include "memchan/markov.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace memchan::markov {

StochasticMatrix::StochasticMatrix(Eigen::MatrixXd entries) : m_(std::move(entries)) {
  require(m_.rows() == m_.cols(), "transition matrix must be square");
  require(m_.rows() >= 2, "transition matrix needs d >= 2");
  require(m_.allFinite(), "transition matrix has non-finite entries");
  require((m_.array() >= 0.0).all(), "transition matrix has negative entries");
  for (Eigen::Index j = 0; j < m_.cols(); ++j) {
    const double s = m_.col(j).sum();
    if (std::abs(s - 1.0) > 1e-10) {
      require(false, "column " + std::to_string(j) + " sums to " + std::to_string(s) +
                         " (matrices are column-stochastic: p_i(s+1) = sum_j M_ij p_j(s))");
    }
  }
}

StochasticMatrix StochasticMatrix::from_columns(const std::vector<std::vector<double>>& columns) {
  const auto d = static_cast<Eigen::Index>(columns.size());
  Eigen::MatrixXd m(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    require(static_cast<Eigen::Index>(columns[j].size()) == d, "every column needs d entries");
    for (Eigen::Index i = 0; i < d; ++i) m(i, j) = columns[j][i];
  }
  return StochasticMatrix(std::move(m));
}

namespace {

bool reaches_all(const Eigen::MatrixXd& adj) {
  // adj(i, j) > 0 means an edge j -> i
  const auto d = adj.rows();
  std::vector<bool> seen(d, false);
  std::vector<Eigen::Index> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const auto j = stack.back();
    stack.pop_back();
    for (Eigen::Index i = 0; i < d; ++i) {
      if (adj(i, j) > 0.0 && !seen[i]) {
        seen[i] = true;
        stack.push_back(i);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

Eigen::VectorXd power_iterate(const Eigen::MatrixXd& m) {
  // lazy chain (I + M) / 2 shares the stationary vector and is aperiodic
  const Eigen::MatrixXd lazy = 0.5 * (Eigen::MatrixXd::Identity(m.rows(), m.cols()) + m);
  Eigen::VectorXd v = Eigen::VectorXd::Constant(m.rows(), 1.0 / static_cast<double>(m.rows()));
  for (int it = 0; it < 100000; ++it) {
    Eigen::VectorXd next = lazy * v;
    next /= next.sum();
    const double delta = (next - v).cwiseAbs().maxCoeff();
    v = std::move(next);
    if (delta < 1e-15) break;
  }
  return v;
}

}  // namespace

bool check_irreducible(const StochasticMatrix& m) {
  const Eigen::MatrixXd& a = m.matrix();
  return reaches_all(a) && reaches_all(a.transpose());
}

ProbDist stationary(const StochasticMatrix& m) {
  if (!check_irreducible(m)) {
    fail(ErrorKind::NoUniqueStationaryState, "transition matrix is reducible");
  }
  const Eigen::MatrixXd& a = m.matrix();
  Eigen::EigenSolver<Eigen::MatrixXd> es(a);
  Eigen::VectorXd v;
  if (es.info() == Eigen::Success) {
    int unit = 0;
    Eigen::Index idx = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      if (std::abs(es.eigenvalues()(i) - std::complex<double>(1.0, 0.0)) <= 1e-8) {
        ++unit;
        idx = i;
      }
    }
    if (unit > 1) fail(ErrorKind::NoUniqueStationaryState, "eigenvalue 1 is degenerate");
    if (unit == 1) {
      v = es.eigenvectors().col(idx).real();
      v /= v.sum();
    }
  }
  if (v.size() == 0 || (v.array() < -1e-10).any() || (a * v - v).cwiseAbs().maxCoeff() > 1e-10) {
    v = power_iterate(a);
  }
  v = v.cwiseMax(0.0);
  v /= v.sum();
  return ProbDist(std::vector<double>(v.data(), v.data() + v.size()));
}

namespace {

std::vector<double> column_entropies(const StochasticMatrix& m) {
  std::vector<double> h;
  for (int j = 0; j < m.d(); ++j) {
    const Eigen::VectorXd col = m.matrix().col(j);
    h.push_back(shannon_entropy_unchecked(std::span<const double>(col.data(), col.size())));
  }
  return h;
}

}  // namespace

double entropy_rate(const StochasticMatrix& m) {
  const ProbDist v = stationary(m);
  const auto h = column_entropies(m);
  double rate = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) rate += v[i] * h[i];
  return std::clamp(rate, 0.0, std::log2(static_cast<double>(m.d())));
}

CapacityReport capacity(const StochasticMatrix& m) {
  CapacityReport r;
  r.stationary = stationary(m);
  r.column_entropies = column_entropies(m);
  double rate = 0.0;
  for (std::size_t i = 0; i < r.column_entropies.size(); ++i) {
    rate += r.stationary[i] * r.column_entropies[i];
  }
  const double log_d = std::log2(static_cast<double>(m.d()));
  r.entropy_rate_bits = std::clamp(rate, 0.0, log_d);
  r.capacity_bits = log_d - r.entropy_rate_bits;
  return r;
}

double brute_force_diag_entropy(const StochasticMatrix& m, const std::optional<ProbDist>& p0, int n) {
  require(n >= 1, "path length must be >= 1");
  const int d = m.d();
  if (n * std::log2(static_cast<double>(d)) > 24.0 + 1e-12) {
    fail(ErrorKind::EnumerationTooLarge, std::to_string(d) + "^" + std::to_string(n) + " paths");
  }
  const ProbDist init = p0 ? *p0 : stationary(m);
  require(static_cast<int>(init.size()) == d, "initial distribution has wrong dimension");

  const Eigen::MatrixXd& a = m.matrix();
  double h = 0.0;
  // depth-first over paths, carrying the prefix probability
  std::vector<int> state(n, 0);
  std::vector<double> prob(n, 0.0);
  int depth = 0;
  state[0] = -1;
  while (depth >= 0) {
    if (++state[depth] >= d) {
      --depth;
      continue;
    }
    const double p = depth == 0 ? init[state[0]] : prob[depth - 1] * a(state[depth], state[depth - 1]);
    if (p <= 0.0) continue;
    if (depth == n - 1) {
      h -= p * std::log(p);
    } else {
      prob[depth] = p;
      ++depth;
      state[depth] = -1;
    }
  }
  return std::max(h, 0.0) * kLog2E;
}

}  // namespace memchan::markov
