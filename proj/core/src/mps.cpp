#include "memchan/mps.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace memchan::mps {

namespace {

constexpr std::size_t kMaxStrings = std::size_t{1} << 20;
constexpr Eigen::Index kMaxRetainedDim = 4096;

std::size_t ipow(std::size_t base, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

bool fits(std::size_t base, int e, std::size_t cap) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > cap / base) return false;
    r *= base;
  }
  return r <= cap;
}

Eigen::MatrixXcd matrix_power(Eigen::MatrixXcd m, int e) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(m.rows(), m.cols());
  while (e > 0) {
    if (e & 1) out = out * m;
    e >>= 1;
    if (e > 0) m = m * m;
  }
  return out;
}

double spectral_radius(const Eigen::MatrixXcd& m) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

MPSSpec::MPSSpec(std::vector<Eigen::MatrixXcd> matrices) : q_(std::move(matrices)) {
  require(q_.size() >= 2, "an MPS needs at least d = 2 matrices");
  const auto bond = q_.front().rows();
  require(bond >= 1, "bond dimension must be >= 1");
  for (const auto& q : q_) {
    require(q.rows() == bond && q.cols() == bond, "all MPS matrices must be bond x bond");
    require(q.allFinite(), "MPS matrix has non-finite entries");
  }
  const TransferOp t = transfer_operator(*this);
  require(spectral_radius(t.matrix) > 0.0, "transfer operator has zero spectral radius");
}

TransferOp transfer_operator(const MPSSpec& spec) {
  TransferOp t;
  for (const auto& q : spec.matrices()) {
    t.terms.push_back(Eigen::kroneckerProduct(q, q.conjugate()).eval());
  }
  t.matrix = t.terms.front();
  for (std::size_t k = 1; k < t.terms.size(); ++k) t.matrix += t.terms[k];
  return t;
}

namespace {

std::complex<double> scaled_normalization(const Eigen::MatrixXcd& m_scaled, int n) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m_scaled, false);
  std::complex<double> c = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) c += std::pow(es.eigenvalues()(i), n);
  return c;
}

}  // namespace

std::complex<double> normalization(const MPSSpec& spec, int n) {
  require(n >= 1, "chain length must be >= 1");
  const Eigen::MatrixXcd m = transfer_operator(spec).matrix;
  const double lambda1 = spectral_radius(m);
  return std::pow(lambda1, n) * scaled_normalization(m / lambda1, n);
}

namespace {

/// Visits tr(Q_{x_0} ... Q_{x_{n-1}}) for every string, site 0 most significant.
template <class Visit>
void for_each_amplitude(const std::vector<Eigen::MatrixXcd>& q, int n, Visit&& visit) {
  const int d = static_cast<int>(q.size());
  const auto bond = q.front().rows();
  std::vector<Eigen::MatrixXcd> prefix(static_cast<std::size_t>(n), Eigen::MatrixXcd(bond, bond));
  std::vector<int> digit(static_cast<std::size_t>(n), -1);
  std::size_t index = 0;
  int depth = 0;
  while (depth >= 0) {
    auto& x = digit[static_cast<std::size_t>(depth)];
    if (++x >= d) {
      x = -1;
      --depth;
      continue;
    }
    const auto& qx = q[static_cast<std::size_t>(x)];
    prefix[static_cast<std::size_t>(depth)] =
        depth == 0 ? qx : (prefix[static_cast<std::size_t>(depth - 1)] * qx).eval();
    if (depth == n - 1) {
      visit(index++, prefix[static_cast<std::size_t>(depth)].trace());
    } else {
      ++depth;
    }
  }
}

/// Matrices rescaled so that the transfer operator has spectral radius 1.
std::vector<Eigen::MatrixXcd> rescaled(const MPSSpec& spec, double& lambda1) {
  lambda1 = spectral_radius(transfer_operator(spec).matrix);
  std::vector<Eigen::MatrixXcd> q = spec.matrices();
  for (auto& m : q) m /= std::sqrt(lambda1);
  return q;
}

}  // namespace

ProbDist diag_distribution(const MPSSpec& spec, int n) {
  require(n >= 1, "chain length must be >= 1");
  if (!fits(static_cast<std::size_t>(spec.d()), n, kMaxStrings)) {
    fail(ErrorKind::EnumerationTooLarge, std::to_string(spec.d()) + "^" + std::to_string(n) + " strings");
  }
  double lambda1 = 0.0;
  const auto q = rescaled(spec, lambda1);
  const std::complex<double> c = normalization(MPSSpec(q), n);
  if (!(c.real() > 1e-300) || std::abs(c.imag()) > 1e-10 * std::abs(c)) {
    fail(ErrorKind::DegenerateMps, "non-positive normalization C(N)");
  }
  std::vector<double> p(ipow(static_cast<std::size_t>(spec.d()), n));
  double total = 0.0;
  for_each_amplitude(q, n, [&](std::size_t i, std::complex<double> amp) {
    p[i] = std::norm(amp);
    total += p[i];
  });
  if (std::abs(total - c.real()) > 1e-8 * c.real()) {
    fail(ErrorKind::DegenerateMps, "enumerated mass disagrees with C(N)");
  }
  for (double& v : p) v /= c.real();
  // C(N) and the enumerated sum agree to round-off; absorb the residue
  return ProbDist::from_weights(std::move(p));
}

double diag_entropy_bits(const MPSSpec& spec, int n) {
  return shannon_entropy(diag_distribution(spec, n));
}

Eigen::VectorXcd state_vector(const MPSSpec& spec, int n) {
  require(n >= 1, "chain length must be >= 1");
  if (!fits(static_cast<std::size_t>(spec.d()), n, kMaxStrings)) {
    fail(ErrorKind::EnumerationTooLarge, "state vector too large");
  }
  double lambda1 = 0.0;
  const auto q = rescaled(spec, lambda1);
  Eigen::VectorXcd psi(static_cast<Eigen::Index>(ipow(static_cast<std::size_t>(spec.d()), n)));
  for_each_amplitude(q, n, [&](std::size_t i, std::complex<double> amp) {
    psi(static_cast<Eigen::Index>(i)) = amp;
  });
  const double norm = psi.norm();
  if (!(norm > 0.0)) fail(ErrorKind::DegenerateMps, "MPS state vanishes");
  return psi / norm;
}

Rank1Params rank1_params(const MPSSpec& spec) {
  require(spec.d() == 2, "the rank-1 reduction needs d = 2");
  const TransferOp t = transfer_operator(spec);
  for (const auto& term : t.terms) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(term);
    const auto& sv = svd.singularValues();
    if (sv.size() > 1 && sv(1) > 1e-10 * sv(0)) {
      fail(ErrorKind::NotRank1, "symbol matrix has second singular value " + std::to_string(sv(1)));
    }
  }
  const std::complex<double> ta = t.terms[0].trace();
  const std::complex<double> tb = t.terms[1].trace();
  if (std::abs(ta) <= 1e-12 || std::abs(tb) <= 1e-12) {
    fail(ErrorKind::NilpotentSymbol, "trace of a symbol matrix vanishes");
  }
  Rank1Params p;
  p.a = ta.real();
  p.b = tb.real();
  p.c = (t.terms[0] * t.terms[1]).trace().real() / (p.a * p.b);
  if (std::abs(p.c) <= 1e-14) p.c = 0.0;
  require(p.a > 0.0 && p.b > 0.0 && p.c >= 0.0, "rank-1 parameters must be non-negative");
  return p;
}

MPSSpec canonical_rank1(const Rank1Params& p) {
  require(p.a > 0.0 && p.b > 0.0 && p.c >= 0.0, "need a, b > 0 and c >= 0");
  const double off = std::pow(p.c * p.a * p.b, 0.25);
  Eigen::MatrixXcd q0 = Eigen::MatrixXcd::Zero(2, 2);
  Eigen::MatrixXcd q1 = Eigen::MatrixXcd::Zero(2, 2);
  q0(0, 0) = std::sqrt(p.a);
  q0(0, 1) = off;
  q1(1, 0) = off;
  q1(1, 1) = std::sqrt(p.b);
  return MPSSpec({q0, q1});
}

ising::IsingParams ising_from_rank1(const Rank1Params& p) {
  require(p.a > 0.0 && p.b > 0.0, "need a, b > 0");
  require(p.c >= 0.0, "need c >= 0");
  if (p.c == 0.0) fail(ErrorKind::DeterministicLimit, "c = 0");
  ising::IsingParams out;
  out.beta = 1.0;
  out.J = 0.5 * (std::log(p.a) + std::log(p.b));
  out.M = 0.5 * (std::log(p.a) - std::log(p.b));
  out.D = out.J + 0.25 * std::log(p.c);
  return out;
}

double capacity_rank1(const Rank1Params& p) {
  require(p.a > 0.0 && p.b > 0.0, "need a, b > 0");
  require(p.c >= 0.0, "need c >= 0");
  if (p.c == 0.0) return 1.0;
  return ising::capacity(ising_from_rank1(p));
}

MPSSpec wolf_mps(double g) {
  Eigen::MatrixXcd q0(2, 2), q1(2, 2);
  q0 << 0.0, 0.0, 1.0, 1.0;
  q1 << 1.0, g, 0.0, 0.0;
  return MPSSpec({q0, q1});
}

double wolf_capacity(double g) { return capacity_rank1(rank1_params(wolf_mps(g))); }

TransferSpectrum transfer_spectrum(const MPSSpec& spec, double unit_tol) {
  const Eigen::MatrixXcd m = transfer_operator(spec).matrix;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
  std::vector<std::complex<double>> ev(es.eigenvalues().data(),
                                       es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), [](auto x, auto y) { return std::abs(x) > std::abs(y); });
  TransferSpectrum out;
  out.lambda1 = std::abs(ev.front());
  if (!(out.lambda1 > 0.0)) fail(ErrorKind::InvalidInput, "zero transfer operator");
  int unit = 0;
  for (auto& e : ev) {
    e /= out.lambda1;
    out.moduli.push_back(std::abs(e));
    if (std::abs(out.moduli.back() - 1.0) <= unit_tol) ++unit;
  }
  out.eigenvalues = std::move(ev);
  out.gap = out.moduli.size() > 1 ? 1.0 - out.moduli[1] : 1.0;
  out.unique_fixed_point = unit == 1;
  return out;
}

void validate(const BlockLayout& layout) {
  require(layout.l >= 1 && layout.v >= 1 && layout.N >= 1 && layout.s >= 0, "block layout sizes must be positive");
  require(layout.v * (layout.l + layout.s) <= layout.N || (layout.v == 1 && layout.l <= layout.N),
          "block layout does not fit in the chain");
}

namespace {

/// Products over pairs of retained index strings (a, b), stored at a * dim + b.
struct PairProducts {
  Eigen::Index dim = 1;
  std::vector<Eigen::MatrixXcd> ops;
};

class Contractor {
 public:
  Contractor(const std::vector<Eigen::MatrixXcd>& q) : d_(static_cast<int>(q.size())) {
    const auto dd = q.front().rows() * q.front().rows();
    site_.resize(static_cast<std::size_t>(d_ * d_));
    m_ = Eigen::MatrixXcd::Zero(dd, dd);
    for (int x = 0; x < d_; ++x) {
      for (int y = 0; y < d_; ++y) {
        site_[static_cast<std::size_t>(x * d_ + y)] =
            Eigen::kroneckerProduct(q[static_cast<std::size_t>(x)], q[static_cast<std::size_t>(y)].conjugate()).eval();
      }
      m_ += site_[static_cast<std::size_t>(x * d_ + x)];
    }
  }

  const Eigen::MatrixXcd& transfer() const { return m_; }

  const Eigen::MatrixXcd& power(int e) {
    auto it = powers_.find(e);
    if (it == powers_.end()) it = powers_.emplace(e, matrix_power(m_, e)).first;
    return it->second;
  }

  /// Extends every product by one retained site followed by `gap` traced sites.
  PairProducts extend(const PairProducts& in, int gap) {
    PairProducts out;
    out.dim = in.dim * d_;
    out.ops.resize(static_cast<std::size_t>(out.dim * out.dim));
    const Eigen::MatrixXcd& tail = power(gap);
    for (Eigen::Index a = 0; a < in.dim; ++a) {
      for (Eigen::Index b = 0; b < in.dim; ++b) {
        const auto& base = in.ops[static_cast<std::size_t>(a * in.dim + b)];
        for (int x = 0; x < d_; ++x) {
          for (int y = 0; y < d_; ++y) {
            const Eigen::Index na = a * d_ + x;
            const Eigen::Index nb = b * d_ + y;
            out.ops[static_cast<std::size_t>(na * out.dim + nb)] =
                base * site_[static_cast<std::size_t>(x * d_ + y)] * tail;
          }
        }
      }
    }
    return out;
  }

 private:
  int d_;
  std::vector<Eigen::MatrixXcd> site_;
  Eigen::MatrixXcd m_;
  std::map<int, Eigen::MatrixXcd> powers_;
};

}  // namespace

Eigen::MatrixXcd reduced_density(const MPSSpec& spec, int n, std::span<const int> sites) {
  require(n >= 1, "chain length must be >= 1");
  std::vector<int> s(sites.begin(), sites.end());
  std::sort(s.begin(), s.end());
  require(!s.empty(), "no sites retained");
  require(std::adjacent_find(s.begin(), s.end()) == s.end(), "retained sites must be distinct");
  require(s.front() >= 0 && s.back() < n, "retained site outside the chain");
  const int k = static_cast<int>(s.size());
  if (!fits(static_cast<std::size_t>(spec.d()), k, static_cast<std::size_t>(kMaxRetainedDim))) {
    fail(ErrorKind::EnumerationTooLarge, "retained dimension exceeds 4096");
  }

  double lambda1 = 0.0;
  const auto q = rescaled(spec, lambda1);
  Contractor con(q);
  const std::complex<double> c = scaled_normalization(con.transfer(), n);
  if (!(c.real() > 0.0) || std::abs(c.imag()) > 1e-10 * std::abs(c)) {
    fail(ErrorKind::DegenerateMps, "non-positive normalization C(N)");
  }

  // traced sites after each retained site, the last gap wrapping round the ring
  std::vector<int> gaps(static_cast<std::size_t>(k));
  for (int i = 0; i + 1 < k; ++i) gaps[static_cast<std::size_t>(i)] = s[static_cast<std::size_t>(i + 1)] - s[static_cast<std::size_t>(i)] - 1;
  gaps.back() = (n - 1 - s.back()) + s.front();

  const int k1 = (k + 1) / 2;
  const auto dd = con.transfer().rows();
  PairProducts first{1, {Eigen::MatrixXcd::Identity(dd, dd)}};
  PairProducts second{1, {Eigen::MatrixXcd::Identity(dd, dd)}};
  for (int i = 0; i < k1; ++i) first = con.extend(first, gaps[static_cast<std::size_t>(i)]);
  for (int i = k1; i < k; ++i) second = con.extend(second, gaps[static_cast<std::size_t>(i)]);

  // rho[(a1 a2), (b1 b2)] = sum_ij first[a1 b1]_ij second[a2 b2]_ji, as one GEMM
  const Eigen::Index e = dd * dd;
  Eigen::MatrixXcd x(static_cast<Eigen::Index>(first.ops.size()), e);
  Eigen::MatrixXcd y(e, static_cast<Eigen::Index>(second.ops.size()));
  for (std::size_t r = 0; r < first.ops.size(); ++r) {
    x.row(static_cast<Eigen::Index>(r)) = first.ops[r].reshaped().transpose();
  }
  for (std::size_t col = 0; col < second.ops.size(); ++col) {
    y.col(static_cast<Eigen::Index>(col)) = second.ops[col].transpose().reshaped();
  }
  const Eigen::MatrixXcd z = x * y;

  const Eigen::Index dim1 = first.dim;
  const Eigen::Index dim2 = second.dim;
  Eigen::MatrixXcd rho(dim1 * dim2, dim1 * dim2);
  for (Eigen::Index a1 = 0; a1 < dim1; ++a1) {
    for (Eigen::Index b1 = 0; b1 < dim1; ++b1) {
      for (Eigen::Index a2 = 0; a2 < dim2; ++a2) {
        for (Eigen::Index b2 = 0; b2 < dim2; ++b2) {
          rho(a1 * dim2 + a2, b1 * dim2 + b2) = z(a1 * dim1 + b1, a2 * dim2 + b2);
        }
      }
    }
  }
  rho /= c.real();
  return 0.5 * (rho + rho.adjoint());
}

namespace {

std::vector<int> block_sites(const BlockLayout& layout, std::span<const int> which) {
  std::vector<int> sites;
  for (int blk : which) {
    require(blk >= 0 && blk < layout.v, "live block index out of range");
    for (int j = 0; j < layout.l; ++j) sites.push_back(layout.block_start(blk) + j);
  }
  return sites;
}

}  // namespace

Eigen::MatrixXcd reduced_block_density(const MPSSpec& spec, const BlockLayout& layout,
                                       std::span<const int> which) {
  validate(layout);
  require(!which.empty(), "select at least one live block");
  std::vector<int> w(which.begin(), which.end());
  std::sort(w.begin(), w.end());
  require(std::adjacent_find(w.begin(), w.end()) == w.end(), "live blocks must be distinct");
  return reduced_density(spec, layout.N, block_sites(layout, w));
}

double block_product_deviation(const MPSSpec& spec, const BlockLayout& layout) {
  validate(layout);
  if (layout.v == 1) return 0.0;
  std::vector<int> all(static_cast<std::size_t>(layout.v));
  for (int i = 0; i < layout.v; ++i) all[static_cast<std::size_t>(i)] = i;
  const Eigen::MatrixXcd joint = reduced_block_density(spec, layout, all);
  const int first = 0;
  const Eigen::MatrixXcd single = reduced_block_density(spec, layout, std::span<const int>(&first, 1));
  Eigen::MatrixXcd product = single;
  for (int i = 1; i < layout.v; ++i) product = Eigen::kroneckerProduct(product, single).eval();
  return trace_norm_hermitian(joint - product);
}

double longshort_deviation(const MPSSpec& spec, int l, int delta, int n_big) {
  require(l >= 1 && l <= 10, "longshort block length must be in [1, 10]");
  require(delta >= 0, "delta must be >= 0");
  require(l + delta <= n_big, "need l + delta <= N_big");
  if (l + delta == n_big) return 0.0;
  std::vector<int> sites(static_cast<std::size_t>(l));
  for (int i = 0; i < l; ++i) sites[static_cast<std::size_t>(i)] = i;
  const Eigen::MatrixXcd shortc = reduced_density(spec, l + delta, sites);
  const Eigen::MatrixXcd longc = reduced_density(spec, n_big, sites);
  return trace_norm_hermitian(shortc - longc);
}

}  // namespace memchan::mps
