#include "memchan/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

namespace memchan {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid input";
    case ErrorKind::NoUniqueStationaryState: return "no unique stationary state";
    case ErrorKind::EnumerationTooLarge: return "enumeration too large";
    case ErrorKind::ParameterOverflow: return "parameter overflow";
    case ErrorKind::DegenerateMps: return "degenerate MPS";
    case ErrorKind::NotRank1: return "not a rank-1 MPS";
    case ErrorKind::NilpotentSymbol: return "nilpotent symbol matrix";
    case ErrorKind::DeterministicLimit: return "deterministic limit, use capacity_rank1";
    case ErrorKind::InvalidCovariance: return "invalid covariance";
    case ErrorKind::NoConvergence: return "no convergence";
  }
  return "unknown error";
}

ProbDist::ProbDist(std::vector<double> values) : values_(std::move(values)) {
  require(!values_.empty(), "probability vector is empty");
  double total = 0.0;
  for (double& v : values_) {
    require(std::isfinite(v), "probability entry is not finite");
    if (v < 0.0) {
      require(v >= -1e-12, "negative probability " + std::to_string(v));
      v = 0.0;
    }
    total += v;
  }
  require(std::abs(total - 1.0) <= 1e-9, "probabilities sum to " + std::to_string(total));
}

ProbDist ProbDist::from_weights(std::vector<double> weights) {
  double total = 0.0;
  for (double w : weights) {
    require(std::isfinite(w) && w >= -1e-300, "weights must be finite and nonnegative");
    total += std::max(w, 0.0);
  }
  require(total > 0.0, "weights have zero total mass");
  for (double& w : weights) w = std::max(w, 0.0) / total;
  return ProbDist(std::move(weights));
}

double shannon_entropy_unchecked(std::span<const double> p, LogBase base) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  h = std::max(h, 0.0);
  return base == LogBase::Two ? h * kLog2E : h;
}

double shannon_entropy(const ProbDist& p, LogBase base) {
  double h = shannon_entropy_unchecked(p.values(), base);
  double cap = std::log(static_cast<double>(p.size()));
  if (base == LogBase::Two) cap *= kLog2E;
  return std::min(h, cap);
}

double coherent_info_bits(int n, int d, double s_diag_bits) {
  require(n >= 1, "n must be >= 1");
  require(d >= 2, "d must be >= 2");
  const double max_bits = n * std::log2(static_cast<double>(d));
  const double slack = 1e-12 * std::max(1.0, max_bits);
  require(s_diag_bits >= -slack && s_diag_bits <= max_bits + slack,
          "diagonal entropy outside [0, n log2 d]");
  return std::clamp(max_bits - s_diag_bits, 0.0, max_bits);
}

namespace {

void require_distinct(std::span<const Sample> points, std::size_t min_distinct) {
  std::set<double> xs;
  for (const auto& p : points) {
    require(std::isfinite(p.x) && std::isfinite(p.y), "non-finite sample");
    xs.insert(p.x);
  }
  require(xs.size() >= min_distinct,
          "need at least " + std::to_string(min_distinct) + " distinct abscissae");
}

struct Regression {
  double slope;
  double intercept;
  double r_squared;
  double max_abs_residual;
};

Regression linear_regression(std::span<const Sample> points) {
  const double n = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& p : points) {
    mx += p.x;
    my += p.y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& p : points) {
    sxx += (p.x - mx) * (p.x - mx);
    sxy += (p.x - mx) * (p.y - my);
    syy += (p.y - my) * (p.y - my);
  }
  Regression r{};
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  double ss_res = 0.0;
  for (const auto& p : points) {
    const double e = p.y - (r.slope * p.x + r.intercept);
    ss_res += e * e;
    r.max_abs_residual = std::max(r.max_abs_residual, std::abs(e));
  }
  if (syy <= 0.0) {
    r.r_squared = 1.0;
  } else {
    r.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  }
  return r;
}

}  // namespace

FitLine entropy_rate_estimate(std::span<const Sample> points) {
  require(points.size() >= 3, "entropy rate fit needs at least 3 points");
  require_distinct(points, points.size());
  const Regression r = linear_regression(points);
  FitLine fit;
  fit.slope = r.slope;
  fit.intercept = r.intercept;
  fit.max_abs_residual = r.max_abs_residual;
  for (const auto& p : points) fit.window.push_back(p.x);
  return fit;
}

DecayFit fit_exponential_decay(std::span<const Sample> points) {
  require(points.size() >= 3, "decay fit needs at least 3 points");
  require_distinct(points, 2);
  std::vector<Sample> logs;
  logs.reserve(points.size());
  for (const auto& p : points) {
    require(p.y > 0.0, "decay fit needs strictly positive values");
    logs.push_back({p.x, std::log(p.y)});
  }
  const Regression r = linear_regression(logs);
  DecayFit fit;
  fit.rate = r.slope;
  fit.log_amplitude = r.intercept;
  fit.r_squared = r.r_squared;
  return fit;
}

DecayFit fit_decay_with_prefactor(std::span<const PrefactorSample> points) {
  require(points.size() >= 3, "decay fit needs at least 3 points");
  std::set<double> ls;
  std::vector<Sample> plain;
  for (const auto& p : points) {
    require(p.y > 0.0 && p.l > 0.0, "decay fit needs strictly positive values");
    ls.insert(p.l);
    plain.push_back({p.s, p.y});
  }
  if (ls.size() < 2 || points.size() < 4) return fit_exponential_decay(plain);

  const auto rows = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd design(rows, 3);
  Eigen::VectorXd rhs(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& p = points[static_cast<std::size_t>(i)];
    design(i, 0) = 1.0;
    design(i, 1) = p.s;
    design(i, 2) = std::log(p.l);
    rhs(i) = std::log(p.y);
  }
  const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(rhs);
  const Eigen::VectorXd resid = rhs - design * coef;
  const double mean = rhs.mean();
  const double ss_tot = (rhs.array() - mean).square().sum();
  DecayFit fit;
  fit.log_amplitude = coef(0);
  fit.rate = coef(1);
  fit.poly_exponent = coef(2);
  fit.r_squared = ss_tot > 0.0 ? std::clamp(1.0 - resid.squaredNorm() / ss_tot, 0.0, 1.0) : 1.0;
  return fit;
}

RootResult find_root_bisect(const std::function<double(double)>& f, double a, double b, double tol) {
  require(a < b, "bisection needs a < b");
  require(tol > 0.0, "tolerance must be positive");
  double fa = f(a);
  const double fb = f(b);
  if (std::abs(fa) <= tol) return {a, std::abs(fa), 0};
  if (std::abs(fb) <= tol) return {b, std::abs(fb), 0};
  require(fa * fb < 0.0, "no sign change on the bracket");

  int it = 0;
  while (true) {
    ++it;
    const double mid = 0.5 * (a + b);
    const double fm = f(mid);
    if (std::abs(fm) <= tol) return {mid, std::abs(fm), it};
    if (mid <= a || mid >= b) {
      fail(ErrorKind::NoConvergence, "bracket collapsed with residual " + std::to_string(std::abs(fm)));
    }
    if ((fa < 0.0) == (fm < 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
}

PerronResult perron_eigen(const Eigen::MatrixXd& m) {
  require(m.rows() == m.cols() && m.rows() > 0, "perron_eigen needs a square matrix");
  require((m.array() > 0.0).all(), "perron_eigen needs strictly positive entries");

  auto dominant = [](const Eigen::MatrixXd& a) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(a);
    if (es.info() != Eigen::Success) fail(ErrorKind::NoConvergence, "eigen decomposition failed");
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < es.eigenvalues().size(); ++i) {
      if (es.eigenvalues()(i).real() > es.eigenvalues()(best).real()) best = i;
    }
    Eigen::VectorXd v = es.eigenvectors().col(best).real();
    if (v.sum() < 0.0) v = -v;
    return std::pair{es.eigenvalues()(best).real(), v};
  };

  auto [lambda, right] = dominant(m);
  auto [lambda_t, left] = dominant(m.transpose());
  (void)lambda_t;
  right /= right.sum();
  left /= left.dot(right);
  // Perron vectors are strictly positive; clip round-off for tiny components.
  right = right.cwiseMax(0.0);
  left = left.cwiseMax(0.0);
  left /= left.dot(right);

  PerronResult out;
  out.lambda = lambda;
  out.right = std::move(right);
  out.left = std::move(left);
  return out;
}

double trace_norm_hermitian(const Eigen::MatrixXcd& m) {
  require(m.rows() == m.cols(), "trace norm needs a square matrix");
  if (m.size() == 0) return 0.0;
  const Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

}  // namespace memchan
