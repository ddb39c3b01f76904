#include "memchan/spin_ed.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "memchan/error.hpp"
#include "memchan/mps.hpp"
#include "memchan/numerics.hpp"
#include "memchan/parallel.hpp"

namespace memchan::spin {

void validate(const SpinChainSpec& spec) {
  require(spec.n >= kMinSpins && spec.n <= kMaxSpins,
          "spin count must be in [" + std::to_string(kMinSpins) + ", " + std::to_string(kMaxSpins) + "]");
  const LocalTerms t = local_terms(spec.model);
  require(std::isfinite(t.zz) && std::isfinite(t.x) && std::isfinite(t.zxz) && std::isfinite(t.z),
          "model parameters must be finite");
}

LocalTerms local_terms(const Model& model) {
  struct Visitor {
    LocalTerms operator()(const TransverseIsing& m) const { return {-1.0, -m.g, 0.0, 0.0}; }
    LocalTerms operator()(const WolfModel& m) const {
      return {2.0 * (m.g * m.g - 1.0), -(1.0 + m.g) * (1.0 + m.g), (m.g - 1.0) * (m.g - 1.0), 0.0};
    }
    LocalTerms operator()(const LocalTerms& m) const { return m; }
  };
  return std::visit(Visitor{}, model);
}

bool has_spin_flip_symmetry(const Model& model) { return local_terms(model).z == 0.0; }

namespace {

/// Gather form: (H psi)_j = diag_j psi_j + sum_i (x + zxz z_{i-1} z_{i+1}) psi_{j ^ bit_i}
class Hamiltonian {
 public:
  explicit Hamiltonian(const SpinChainSpec& spec) : n_(spec.n), periodic_(spec.periodic), t_(local_terms(spec.model)) {
    validate(spec);
  }

  std::size_t dim() const { return std::size_t{1} << n_; }

  template <class Vec>
  void apply(const Vec& in, Vec& out) const {
    const auto dimension = static_cast<Eigen::Index>(dim());
    out.resize(dimension);
    for (Eigen::Index j = 0; j < dimension; ++j) {
      const auto idx = static_cast<std::uint64_t>(j);
      typename Vec::Scalar acc = diagonal(idx) * in(j);
      for (int i = 0; i < n_; ++i) {
        double coef = t_.x;
        if (t_.zxz != 0.0 && (periodic_ || (i > 0 && i + 1 < n_))) {
          coef += t_.zxz * z(idx, (i + n_ - 1) % n_) * z(idx, (i + 1) % n_);
        }
        if (coef != 0.0) acc += coef * in(static_cast<Eigen::Index>(idx ^ mask(i)));
      }
      out(j) = acc;
    }
  }

  double diagonal(std::uint64_t idx) const {
    double e = 0.0;
    const int bonds = periodic_ ? n_ : n_ - 1;
    for (int i = 0; i < bonds; ++i) e += t_.zz * z(idx, i) * z(idx, (i + 1) % n_);
    if (t_.z != 0.0) {
      for (int i = 0; i < n_; ++i) e += t_.z * z(idx, i);
    }
    return e;
  }

  std::uint64_t mask(int site) const { return std::uint64_t{1} << (n_ - 1 - site); }
  double z(std::uint64_t idx, int site) const { return (idx & mask(site)) ? -1.0 : 1.0; }
  std::uint64_t flip_all() const { return dim() - 1; }

 private:
  int n_;
  bool periodic_;
  LocalTerms t_;
};

enum class Sector { All, Even, Odd };

void project(Eigen::VectorXd& v, Sector sector, std::uint64_t flip) {
  if (sector == Sector::All) return;
  const double sign = sector == Sector::Even ? 1.0 : -1.0;
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    const auto k = static_cast<Eigen::Index>(static_cast<std::uint64_t>(j) ^ flip);
    if (k < j) continue;
    const double avg = 0.5 * (v(j) + sign * v(k));
    v(j) = avg;
    v(k) = sign * avg;
  }
}

struct LanczosResult {
  double e0 = 0.0;
  double e1 = std::numeric_limits<double>::infinity();
  Eigen::VectorXd vec;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

LanczosResult lanczos(const Hamiltonian& h, Sector sector, const SolverOptions& opts) {
  const auto dim = static_cast<Eigen::Index>(h.dim());
  std::mt19937_64 rng(opts.seed + static_cast<std::uint64_t>(sector));
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::VectorXd start(dim);
  for (Eigen::Index j = 0; j < dim; ++j) start(j) = uni(rng);
  project(start, sector, h.flip_all());
  start.normalize();

  const Eigen::Index m_max = std::min<Eigen::Index>(std::max(opts.krylov_dim, 4), dim);
  LanczosResult best;
  Eigen::MatrixXd basis(dim, m_max);
  Eigen::VectorXd w;
  int applications = 0;

  while (true) {
    basis.col(0) = start;
    std::vector<double> alpha, beta;
    Eigen::Index m = 0;
    Eigen::VectorXd ritz_vals;
    Eigen::MatrixXd ritz_vecs;
    bool exhausted = false;
    for (Eigen::Index j = 0; j < m_max; ++j) {
      h.apply(Eigen::VectorXd(basis.col(j)), w);
      ++applications;
      alpha.push_back(basis.col(j).dot(w));
      // two passes of classical Gram-Schmidt against the whole basis
      for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXd coeff = basis.leftCols(j + 1).transpose() * w;
        w -= basis.leftCols(j + 1) * coeff;
      }
      project(w, sector, h.flip_all());
      const double b = w.norm();
      m = j + 1;
      if (b < 1e-13 || j + 1 == m_max || applications >= opts.max_iter) {
        exhausted = b < 1e-13;
        beta.push_back(b);
        break;
      }
      beta.push_back(b);
      basis.col(j + 1) = w / b;
    }
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      tri(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    ritz_vals = es.eigenvalues();
    ritz_vecs = es.eigenvectors();

    Eigen::VectorXd y = basis.leftCols(m) * ritz_vecs.col(0);
    y.normalize();
    Eigen::VectorXd hy;
    h.apply(y, hy);
    ++applications;
    const double residual = (hy - ritz_vals(0) * y).norm();

    best.e0 = ritz_vals(0);
    best.e1 = m > 1 ? ritz_vals(1) : std::numeric_limits<double>::infinity();
    best.vec = y;
    best.residual = residual;
    best.iterations = applications;
    best.converged = residual <= opts.tol;
    if (best.converged || exhausted || applications >= opts.max_iter) break;
    start = y;
  }
  return best;
}

}  // namespace

Eigen::VectorXcd apply_hamiltonian(const SpinChainSpec& spec, const Eigen::VectorXcd& psi) {
  const Hamiltonian h(spec);
  require(static_cast<std::size_t>(psi.size()) == h.dim(), "state vector length must be 2^n");
  Eigen::VectorXcd out;
  h.apply(psi, out);
  return out;
}

Eigen::MatrixXd dense_hamiltonian(const SpinChainSpec& spec) {
  require(spec.n <= kMaxDenseSpins, "dense Hamiltonians are limited to n <= 10");
  const Hamiltonian h(spec);
  const auto dim = static_cast<Eigen::Index>(h.dim());
  Eigen::MatrixXd out(dim, dim);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(dim), col;
  for (Eigen::Index k = 0; k < dim; ++k) {
    e(k) = 1.0;
    h.apply(e, col);
    out.col(k) = col;
    e(k) = 0.0;
  }
  return out;
}

GroundStateResult ground_state(const SpinChainSpec& spec, const SolverOptions& opts) {
  require(opts.tol > 0.0 && opts.max_iter > 0, "solver tolerance and iteration budget must be positive");
  const Hamiltonian h(spec);
  GroundStateResult out;

  auto degenerate = [](double e0, double e1) { return (e1 - e0) < 1e-8 * std::abs(e0) + 1e-10; };

  if (!has_spin_flip_symmetry(spec.model)) {
    const LanczosResult r = lanczos(h, Sector::All, opts);
    out.energy = r.e0;
    out.amplitudes = r.vec.cast<std::complex<double>>();
    out.residual = r.residual;
    out.gap_estimate = std::isfinite(r.e1) ? std::max(r.e1 - r.e0, 0.0) : 0.0;
    out.degenerate_flag = std::isfinite(r.e1) && degenerate(r.e0, r.e1);
    out.converged = r.converged;
    out.iterations = r.iterations;
    return out;
  }

  const LanczosResult even = lanczos(h, Sector::Even, opts);
  const LanczosResult odd = lanczos(h, Sector::Odd, opts);
  std::vector<double> levels{even.e0, even.e1, odd.e0, odd.e1};
  std::sort(levels.begin(), levels.end());
  const bool tie = degenerate(std::min(even.e0, odd.e0), std::max(even.e0, odd.e0));
  const LanczosResult& win = (tie || even.e0 <= odd.e0) ? even : odd;
  const LanczosResult& other = (&win == &even) ? odd : even;

  out.energy = win.e0;
  out.amplitudes = win.vec.cast<std::complex<double>>();
  out.residual = win.residual;
  out.gap_estimate = std::isfinite(levels[1]) ? std::max(levels[1] - levels[0], 0.0) : 0.0;
  out.degenerate_flag = std::isfinite(levels[1]) && degenerate(levels[0], levels[1]);
  out.converged = even.converged && odd.converged;
  out.iterations = even.iterations + odd.iterations;
  if (tie) out.partner = other.vec.cast<std::complex<double>>();
  return out;
}

double diag_entropy_bits(const Eigen::VectorXcd& amplitudes) {
  const double norm2 = amplitudes.squaredNorm();
  require(norm2 > 0.0, "zero state vector");
  require(std::abs(norm2 - 1.0) <= 1e-8, "state vector is not normalized");
  std::vector<double> p(static_cast<std::size_t>(amplitudes.size()));
  for (Eigen::Index i = 0; i < amplitudes.size(); ++i) p[static_cast<std::size_t>(i)] = std::norm(amplitudes(i)) / norm2;
  const double h = shannon_entropy_unchecked(p);
  return std::clamp(h, 0.0, std::log2(static_cast<double>(amplitudes.size())));
}

double diag_entropy_bits(const GroundStateResult& state) { return diag_entropy_bits(state.amplitudes); }

CapacityPoint capacity_point(const SpinChainSpec& spec, const SolverOptions& opts) {
  CapacityPoint pt;
  pt.n = spec.n;
  if (const auto* t = std::get_if<TransverseIsing>(&spec.model)) pt.g = t->g;
  if (const auto* w = std::get_if<WolfModel>(&spec.model)) pt.g = w->g;
  const GroundStateResult gs = ground_state(spec, opts);
  pt.diag_entropy_bits = diag_entropy_bits(gs);
  pt.capacity_bits = std::clamp(1.0 - pt.diag_entropy_bits / spec.n, 0.0, 1.0);
  pt.energy = gs.energy;
  pt.gap_estimate = gs.gap_estimate;
  pt.degenerate = gs.degenerate_flag;
  pt.residual = gs.residual;
  pt.converged = gs.converged;
  if (!gs.converged) pt.error = "lanczos residual " + std::to_string(gs.residual) + " above tolerance";
  return pt;
}

std::vector<CapacityPoint> sweep(ModelKind model, const std::vector<double>& g_values,
                                 const std::vector<int>& n_values, const SolverOptions& opts, bool periodic,
                                 int jobs) {
  require(!g_values.empty() && !n_values.empty(), "sweep grids must be nonempty");
  std::vector<CapacityPoint> rows(g_values.size() * n_values.size());
  parallel_for(rows.size(), jobs, [&](std::size_t k) {
    const int n = n_values[k / g_values.size()];
    const double g = g_values[k % g_values.size()];
    SpinChainSpec spec;
    spec.n = n;
    spec.periodic = periodic;
    if (model == ModelKind::TransverseIsing) {
      spec.model = TransverseIsing{g};
    } else {
      spec.model = WolfModel{g};
    }
    try {
      rows[k] = capacity_point(spec, opts);
    } catch (const std::exception& e) {
      rows[k] = CapacityPoint{};
      rows[k].error = e.what();
    }
    rows[k].n = n;
    rows[k].g = g;
  });
  return rows;
}

WolfCrossCheck wolf_cross_check(int n, double g, const SolverOptions& opts) {
  require(n <= 12, "Wolf cross-check is limited to n <= 12");
  require(g != 0.0, "Wolf cross-check needs g != 0");
  SpinChainSpec spec{n, true, WolfModel{g}};
  const GroundStateResult ed = ground_state(spec, opts);
  const mps::MPSSpec q = mps::wolf_mps(g);
  const Eigen::VectorXcd psi = mps::state_vector(q, n);

  WolfCrossCheck out;
  out.degenerate = ed.degenerate_flag;
  double weight = std::norm(psi.dot(ed.amplitudes));
  if (ed.partner) weight += std::norm(psi.dot(*ed.partner));
  out.overlap = std::sqrt(weight);
  out.entropy_gap = std::abs(diag_entropy_bits(ed) - mps::diag_entropy_bits(q, n));
  return out;
}

}  // namespace memchan::spin
