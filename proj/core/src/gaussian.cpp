#include "memchan/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "quad.hpp"

namespace memchan::gaussian {

namespace {

constexpr double kSymplecticFloor = 1e-8;
constexpr double kZeroValue = 1e-14;

int ring_distance(int i, int j, int n, bool periodic) {
  const int d = std::abs(i - j);
  return periodic ? std::min(d, n - d) : d;
}

QuadMatrix to_quad(const Eigen::MatrixXd& m) { return m.cast<quad>(); }

Eigen::MatrixXd to_double(const QuadMatrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = static_cast<double>(m(i, j));
  return out;
}

std::vector<quad> symplectic_quad(const Eigen::MatrixXd& gamma) {
  const auto dim = gamma.rows();
  const auto m = dim / 2;
  const QuadMatrix g = to_quad(gamma);
  Eigen::SelfAdjointEigenSolver<QuadMatrix> es(g);
  if (es.info() != Eigen::Success) fail(ErrorKind::InvalidCovariance, "eigen decomposition failed");
  if (es.eigenvalues().minCoeff() <= quad(0)) fail(ErrorKind::InvalidCovariance, "covariance is not positive definite");
  QuadVector root(dim);
  for (Eigen::Index i = 0; i < dim; ++i) root(i) = sqrt(es.eigenvalues()(i));
  const QuadMatrix half = es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
  QuadMatrix sigma = QuadMatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < m; ++i) {
    sigma(i, m + i) = quad(1);
    sigma(m + i, i) = quad(-1);
  }
  // K = gamma^{1/2} sigma gamma^{1/2} is antisymmetric with eigenvalues +-i mu_j,
  // so K^T K carries every mu_j^2 twice.
  const QuadMatrix k = half * sigma * half;
  const QuadMatrix ktk = k.transpose() * k;
  Eigen::SelfAdjointEigenSolver<QuadMatrix> ks(0.5 * (ktk + ktk.transpose()), Eigen::EigenvaluesOnly);
  const QuadVector& e = ks.eigenvalues();
  std::vector<quad> mu;
  for (Eigen::Index j = 0; j < m; ++j) {
    const quad lo = e(2 * j);
    const quad hi = e(2 * j + 1);
    if (abs(hi - lo) > quad(1e-10) * std::max(quad(1), quad(abs(hi)))) {
      fail(ErrorKind::InvalidCovariance, "symplectic spectrum is not paired");
    }
    mu.push_back(sqrt(std::max(quad(0), quad((lo + hi) / 2))));
  }
  std::sort(mu.begin(), mu.end(), [](const quad& x, const quad& y) { return x > y; });
  if (!mu.empty() && mu.back() < quad(1) - quad(kSymplecticFloor)) {
    fail(ErrorKind::InvalidCovariance,
         "symplectic eigenvalue " + std::to_string(static_cast<double>(mu.back())) + " violates uncertainty");
  }
  return mu;
}

quad mode_entropy_quad(const quad& mu) {
  if (mu <= quad(1)) return quad(0);
  const quad plus = (mu + 1) / 2;
  const quad minus = (mu - 1) / 2;
  const quad ln2 = log(quad(2));
  return (plus * log(plus) - minus * log(minus)) / ln2;
}

quad entropy_quad(const Eigen::MatrixXd& gamma) {
  quad s = 0;
  for (const quad& mu : symplectic_quad(gamma)) s += mode_entropy_quad(mu);
  return s;
}

Eigen::MatrixXd principal(const Eigen::MatrixXd& gamma, std::span<const int> sites) {
  const auto m = static_cast<int>(gamma.rows() / 2);
  const auto k = static_cast<Eigen::Index>(sites.size());
  std::vector<int> idx;
  for (int s : sites) idx.push_back(s);
  for (int s : sites) idx.push_back(m + s);
  Eigen::MatrixXd out(2 * k, 2 * k);
  for (Eigen::Index i = 0; i < 2 * k; ++i)
    for (Eigen::Index j = 0; j < 2 * k; ++j) out(i, j) = gamma(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  return out;
}

void check_sites(std::span<const int> sites, int modes) {
  require(!sites.empty(), "site subset must be nonempty");
  std::vector<int> s(sites.begin(), sites.end());
  std::sort(s.begin(), s.end());
  require(std::adjacent_find(s.begin(), s.end()) == s.end(), "sites must be distinct");
  require(s.front() >= 0 && s.back() < modes, "site index out of range");
}

}  // namespace

PotentialMatrix::PotentialMatrix(Eigen::MatrixXd v, int bandwidth, bool periodic)
    : v_(std::move(v)), bandwidth_(bandwidth), periodic_(periodic) {
  require(v_.rows() == v_.cols() && v_.rows() >= 1, "potential matrix must be square");
  require(v_.allFinite(), "potential matrix has non-finite entries");
  require((v_ - v_.transpose()).cwiseAbs().maxCoeff() <= 1e-12, "potential matrix must be symmetric");
  require(bandwidth_ >= 1, "bandwidth must be >= 1");
  const int n = static_cast<int>(v_.rows());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (2 * ring_distance(i, j, n, periodic_) >= bandwidth_ && v_(i, j) != 0.0) {
        require(false, "potential entry (" + std::to_string(i) + "," + std::to_string(j) + ") lies outside the band");
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(v_, Eigen::EigenvaluesOnly);
  require(es.eigenvalues().minCoeff() > 0.0, "potential matrix is not positive definite");
}

PotentialMatrix harmonic_chain(int n, double kappa, bool periodic) {
  require(n >= 2, "harmonic chain needs at least 2 sites");
  require(std::isfinite(kappa), "kappa must be finite");
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    v(i, i) = 1.0 + 2.0 * kappa;
    if (i + 1 < n || (periodic && n > 2)) {
      const int j = (i + 1) % n;
      v(i, j) -= kappa;
      v(j, i) -= kappa;
    }
  }
  if (periodic && n == 2) {
    v(0, 1) -= kappa;
    v(1, 0) -= kappa;
  }
  return PotentialMatrix(std::move(v), 3, periodic);
}

CovarianceMatrix::CovarianceMatrix(Eigen::MatrixXd gamma) : gamma_(std::move(gamma)) {
  require(gamma_.rows() == gamma_.cols() && gamma_.rows() >= 2 && gamma_.rows() % 2 == 0,
          "covariance matrix must be 2m x 2m");
  require(gamma_.allFinite(), "covariance matrix has non-finite entries");
  require((gamma_ - gamma_.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, gamma_.cwiseAbs().maxCoeff()),
          "covariance matrix must be symmetric");
}

CovarianceMatrix ground_covariance(const PotentialMatrix& v) {
  const auto n = static_cast<Eigen::Index>(v.n());
  Eigen::SelfAdjointEigenSolver<QuadMatrix> es(to_quad(v.matrix()));
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= quad(0)) {
    fail(ErrorKind::InvalidInput, "potential matrix is not positive definite");
  }
  QuadVector root(n), inv_root(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    root(i) = sqrt(es.eigenvalues()(i));
    inv_root(i) = quad(1) / root(i);
  }
  const QuadMatrix& u = es.eigenvectors();
  const QuadMatrix gx = u * inv_root.asDiagonal() * u.transpose();
  const QuadMatrix gp = u * root.asDiagonal() * u.transpose();
  Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  Eigen::MatrixXd gxd = to_double(gx);
  Eigen::MatrixXd gpd = to_double(gp);
  gamma.topLeftCorner(n, n) = 0.5 * (gxd + gxd.transpose());
  gamma.bottomRightCorner(n, n) = 0.5 * (gpd + gpd.transpose());
  const double err = (gamma.topLeftCorner(n, n) * gamma.topLeftCorner(n, n) * v.matrix() -
                      Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (err > 1e-10) fail(ErrorKind::InvalidInput, "ground covariance reconstruction error " + std::to_string(err));
  return CovarianceMatrix(std::move(gamma));
}

CovarianceMatrix reduce(const CovarianceMatrix& gamma, std::span<const int> sites) {
  check_sites(sites, gamma.modes());
  return CovarianceMatrix(principal(gamma.matrix(), sites));
}

SymplecticSpectrum symplectic_eigenvalues(const CovarianceMatrix& gamma) {
  SymplecticSpectrum out;
  for (const quad& mu : symplectic_quad(gamma.matrix())) out.mu.push_back(static_cast<double>(mu));
  return out;
}

double mode_entropy(double mu) {
  if (mu < 1.0 - kSymplecticFloor) fail(ErrorKind::InvalidCovariance, "symplectic eigenvalue below 1");
  return static_cast<double>(mode_entropy_quad(quad(mu)));
}

double entropy(const CovarianceMatrix& gamma) { return static_cast<double>(entropy_quad(gamma.matrix())); }

double fannes_threshold() {
  static const double b = [] {
    auto f = [](double k) { return (k + 2.0) * std::log2(k + 2.0) + k * std::log2(k) - 2.0; };
    return find_root_bisect(f, 1e-6, 1.0, 1e-14).x;
  }();
  return b;
}

FannesBound fannes_gaussian_bound(const SymplecticSpectrum& mu1, const SymplecticSpectrum& mu2) {
  require(mu1.mu.size() == mu2.mu.size(), "symplectic spectra must have equal length");
  require(!mu1.mu.empty(), "symplectic spectra are empty");
  FannesBound out;
  double max_delta = 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j < mu1.mu.size(); ++j) {
    const double delta = std::abs(mu1.mu[j] - mu2.mu[j]);
    max_delta = std::max(max_delta, delta);
    total += delta;
    if (delta > 0.0) out.bound_fine -= delta * std::log2(delta);
  }
  out.applicable = max_delta <= fannes_threshold();
  const double n = static_cast<double>(mu1.mu.size());
  out.bound_coarse = total > 0.0 ? total * std::log2(n) - total * std::log2(total) : 0.0;
  return out;
}

MutualInfo mutual_info_and_trace_bound(const CovarianceMatrix& gamma, std::span<const int> a,
                                       std::span<const int> b) {
  check_sites(a, gamma.modes());
  check_sites(b, gamma.modes());
  for (int x : a) {
    require(std::find(b.begin(), b.end(), x) == b.end(), "subsets A and B overlap");
  }
  std::vector<int> ab(a.begin(), a.end());
  ab.insert(ab.end(), b.begin(), b.end());
  const quad sa = entropy_quad(principal(gamma.matrix(), a));
  const quad sb = entropy_quad(principal(gamma.matrix(), b));
  const quad sab = entropy_quad(principal(gamma.matrix(), ab));
  const quad info = (sa + sb - sab) * log(quad(2));
  MutualInfo out;
  out.i_nats = static_cast<double>(info);
  if (out.i_nats < -1e-9) fail(ErrorKind::InvalidCovariance, "negative mutual information");
  out.trace_bound = static_cast<double>(sqrt(2 * std::max(info, quad(0))));
  return out;
}

namespace {

void fit_rows(DecayExperiment& exp) {
  std::vector<Sample> pts;
  for (const auto& r : exp.rows) {
    if (r.value > kZeroValue) pts.push_back({r.abscissa, r.value});
  }
  const bool all_zero = std::all_of(exp.rows.begin(), exp.rows.end(), [](const ExperimentRow& r) { return r.value <= kZeroValue; });
  exp.degenerate = all_zero;
  if (pts.size() >= 3) exp.fit = fit_exponential_decay(pts);
}

}  // namespace

DecayExperiment theorem1_decay_experiment(double kappa, int block, const std::vector<int>& separations, int n_total) {
  require(block >= 1, "block length must be >= 1");
  require(!separations.empty(), "need at least one separation");
  const int max_d = *std::max_element(separations.begin(), separations.end());
  require(*std::min_element(separations.begin(), separations.end()) >= 0, "separations must be >= 0");
  require(2 * block + max_d <= n_total, "chain too short for the requested blocks");
  const CovarianceMatrix gamma = ground_covariance(harmonic_chain(n_total, kappa, true));

  DecayExperiment exp;
  std::vector<int> a(static_cast<std::size_t>(block));
  for (int i = 0; i < block; ++i) a[static_cast<std::size_t>(i)] = i;
  for (int d : separations) {
    std::vector<int> b(static_cast<std::size_t>(block));
    for (int i = 0; i < block; ++i) b[static_cast<std::size_t>(i)] = block + d + i;
    const MutualInfo mi = mutual_info_and_trace_bound(gamma, a, b);
    ExperimentRow row;
    row.abscissa = d;
    row.value = mi.trace_bound;
    row.mutual_info_nats = mi.i_nats;
    exp.rows.push_back(row);
  }
  fit_rows(exp);
  return exp;
}

DecayExperiment longshort_covariance_experiment(double kappa, int l, const std::vector<int>& deltas, int n_big) {
  require(l >= 1, "block length must be >= 1");
  require(!deltas.empty(), "need at least one delta");
  for (int delta : deltas) {
    require(delta >= 1 && l + delta <= n_big, "need 1 <= delta and l + delta <= n_big");
  }
  std::vector<int> sites(static_cast<std::size_t>(l));
  for (int i = 0; i < l; ++i) sites[static_cast<std::size_t>(i)] = i;
  const CovarianceMatrix big = reduce(ground_covariance(harmonic_chain(n_big, kappa, true)), sites);
  const SymplecticSpectrum mu_big = symplectic_eigenvalues(big);
  const double s_big = entropy(big);

  DecayExperiment exp;
  for (int delta : deltas) {
    const CovarianceMatrix small = reduce(ground_covariance(harmonic_chain(l + delta, kappa, true)), sites);
    const Eigen::MatrixXd diff = small.matrix() - big.matrix();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(diff, Eigen::EigenvaluesOnly);
    const FannesBound fb = fannes_gaussian_bound(symplectic_eigenvalues(small), mu_big);
    ExperimentRow row;
    row.abscissa = delta;
    row.value = es.eigenvalues().cwiseAbs().maxCoeff();
    row.entropy_bound = fb.applicable ? fb.bound_fine : std::nan("");
    row.entropy_diff = std::abs(entropy(small) - s_big);
    exp.rows.push_back(row);
  }
  fit_rows(exp);
  return exp;
}

}  // namespace memchan::gaussian
