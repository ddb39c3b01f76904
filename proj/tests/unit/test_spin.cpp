#include <cmath>
#include <complex>

#include "memchan/mps.hpp"
#include "memchan/spin_ed.hpp"
#include "support.hpp"

using namespace memchan;
using namespace memchan::spin;
using cd = std::complex<double>;

namespace {

Eigen::VectorXcd plus_state(int n) {
  const long dim = 1L << n;
  return Eigen::VectorXcd::Constant(dim, cd(1.0 / std::sqrt(double(dim))));
}

Eigen::VectorXcd random_state(std::mt19937_64& g, long dim) {
  Eigen::VectorXcd v(dim);
  for (long i = 0; i < dim; ++i) v(i) = cd(testing::uniform(g, -1, 1), testing::uniform(g, -1, 1));
  return v;
}

// Cyclic shift of site labels: site i -> i+1.
Eigen::VectorXcd shift_sites(const Eigen::VectorXcd& psi, int n) {
  Eigen::VectorXcd out(psi.size());
  for (long x = 0; x < psi.size(); ++x) {
    const long y = ((x >> 1) | ((x & 1) << (n - 1)));
    out(y) = psi(x);
  }
  return out;
}

}  // namespace

TEST_CASE("spec validation") {
  CHECK_ERROR_KIND(validate({3, true, TransverseIsing{1.0}}), ErrorKind::InvalidInput);
  CHECK_ERROR_KIND(validate({19, true, TransverseIsing{1.0}}), ErrorKind::InvalidInput);
  CHECK_ERROR_KIND(validate({6, true, TransverseIsing{NAN}}), ErrorKind::InvalidInput);
  CHECK_ERROR_KIND(apply_hamiltonian({6, true, TransverseIsing{1.0}}, Eigen::VectorXcd::Zero(10)), ErrorKind::InvalidInput);
}

TEST_CASE("apply hamiltonian examples") {
  const int n = 8;
  Eigen::VectorXcd up = Eigen::VectorXcd::Zero(1L << n);
  up(0) = 1.0;
  CHECK((apply_hamiltonian({n, true, TransverseIsing{0.0}}, up) + double(n) * up).norm() < 1e-12);
  const auto plus = plus_state(n);
  CHECK((apply_hamiltonian({n, true, LocalTerms{0, -0.7, 0, 0}}, plus) + 0.7 * n * plus).norm() < 1e-12);
  const auto w = ground_state({6, true, WolfModel{1.0}});
  CHECK(w.energy == doctest::Approx(-24.0).epsilon(1e-10));
}

TEST_CASE("ground states") {
  const auto g0 = ground_state({8, true, TransverseIsing{0.0}});
  CHECK(g0.energy == doctest::Approx(-8.0).epsilon(1e-10));
  CHECK(g0.degenerate_flag);
  CHECK(diag_entropy_bits(g0) == doctest::Approx(1.0).epsilon(1e-8));
  const auto big = ground_state({8, true, TransverseIsing{100.0}});
  CHECK(std::abs(big.energy + 800.0) < 0.1);
  CHECK(std::abs(big.amplitudes.dot(plus_state(8))) > 0.999);
  CHECK(big.amplitudes.norm() == doctest::Approx(1.0).epsilon(1e-10));
  const auto g1 = ground_state({6, true, TransverseIsing{1.0}});
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_hamiltonian({6, true, TransverseIsing{1.0}}));
  CHECK(std::abs(g1.energy - es.eigenvalues()(0)) < 1e-9);
  CHECK(g1.residual <= 1e-10);
  CHECK(g1.converged);
}

TEST_CASE("Wolf ground energies") {
  CHECK(ground_state({8, true, WolfModel{0.5}}).energy == doctest::Approx(-20.0).epsilon(1e-10));
  CHECK(ground_state({8, true, WolfModel{2.0}}).energy == doctest::Approx(-80.0).epsilon(1e-10));
  CHECK(ground_state({8, true, WolfModel{1.0}}).energy == doctest::Approx(-32.0).epsilon(1e-10));
}

TEST_CASE("diag entropy examples") {
  Eigen::VectorXcd up = Eigen::VectorXcd::Zero(64);
  up(0) = 1.0;
  CHECK(diag_entropy_bits(up) == 0.0);
  CHECK(diag_entropy_bits(plus_state(6)) == doctest::Approx(6.0));
  Eigen::VectorXcd ghz = Eigen::VectorXcd::Zero(64);
  ghz(0) = ghz(63) = 1 / std::sqrt(2.0);
  CHECK(diag_entropy_bits(ghz) == doctest::Approx(1.0));
}

TEST_CASE("capacity points") {
  CHECK(capacity_point({10, true, TransverseIsing{100.0}}).capacity_bits <= 1e-3);
  const auto p0 = capacity_point({10, true, TransverseIsing{0.0}});
  CHECK(p0.capacity_bits == doctest::Approx(0.9).epsilon(1e-8));
  CHECK(p0.degenerate);
  const auto pw = capacity_point({8, true, WolfModel{0.5}});
  CHECK(std::abs(pw.diag_entropy_bits - mps::diag_entropy_bits(mps::wolf_mps(0.5), 8)) < 1e-6);
}

TEST_CASE("sweeps") {
  const auto one = sweep(ModelKind::TransverseIsing, {0.7}, {6});
  REQUIRE(one.size() == 1);
  CHECK(one[0].n == 6);
  const auto a = sweep(ModelKind::TransverseIsing, {0.5, 1.0, 1.5}, {6, 8}, {}, true, 1);
  const auto b = sweep(ModelKind::TransverseIsing, {0.5, 1.0, 1.5}, {6, 8}, {}, true, 4);
  REQUIRE(a.size() == 6);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].n == b[i].n);
    CHECK(a[i].g == b[i].g);
    CHECK(a[i].capacity_bits == b[i].capacity_bits);
    CHECK(a[i].capacity_bits >= 0.0);
    CHECK(a[i].capacity_bits <= 1.0);
  }
  CHECK(a[0].n == 6);
  CHECK(a[3].n == 8);
}

TEST_CASE("Wolf cross checks") {
  const auto c2 = wolf_cross_check(8, 2.0);
  CHECK(c2.overlap >= 1 - 1e-8);
  const auto c5 = wolf_cross_check(8, 0.5);
  CHECK(c5.entropy_gap <= 1e-6);
  const auto c1 = wolf_cross_check(6, 1.0);
  CHECK(c1.entropy_gap <= 1e-9);
  CHECK_ERROR_KIND(wolf_cross_check(8, 0.0), ErrorKind::InvalidInput);
  CHECK_ERROR_KIND(wolf_cross_check(14, 0.5), ErrorKind::InvalidInput);
}

TEST_CASE("property: Hamiltonian is Hermitian on random vectors") {
  auto& g = testing::rng(51);
  for (int t = 0; t < 20; ++t) {
    const int n = 4 + int(g() % 5);
    const SpinChainSpec spec{n, t % 2 == 0,
                             LocalTerms{testing::uniform(g, -2, 2), testing::uniform(g, -2, 2),
                                        testing::uniform(g, -2, 2), testing::uniform(g, -1, 1)}};
    const auto phi = random_state(g, 1L << n), psi = random_state(g, 1L << n);
    const cd lhs = phi.dot(apply_hamiltonian(spec, psi));
    const cd rhs = std::conj(psi.dot(apply_hamiltonian(spec, phi)));
    CHECK(std::abs(lhs - rhs) < 1e-10 * (1 + std::abs(lhs)));
  }
}

TEST_CASE("property: iterative energies match dense diagonalization") {
  auto& g = testing::rng(52);
  for (int t = 0; t < 10; ++t) {
    const int n = 4 + int(g() % 7);
    const SpinChainSpec spec{n, true, LocalTerms{testing::uniform(g, -2, 0), testing::uniform(g, -2, 0),
                                                 testing::uniform(g, -1, 1), t % 3 == 0 ? 0.3 : 0.0}};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_hamiltonian(spec), Eigen::EigenvaluesOnly);
    CHECK(std::abs(ground_state(spec).energy - es.eigenvalues()(0)) < 1e-9);
  }
}

TEST_CASE("property: translation covariance and flip symmetry") {
  auto& g = testing::rng(53);
  for (int t = 0; t < 10; ++t) {
    const int n = 6 + 2 * int(g() % 2);
    const double gg = testing::uniform(g, 0.3, 1.8);
    const SpinChainSpec spec{n, true, TransverseIsing{gg}};
    const auto psi = random_state(g, 1L << n);
    CHECK((shift_sites(apply_hamiltonian(spec, psi), n) - apply_hamiltonian(spec, shift_sites(psi, n))).norm() < 1e-10);
    const auto gs = ground_state(spec);
    CHECK(std::abs(diag_entropy_bits(gs) - diag_entropy_bits(shift_sites(gs.amplitudes, n))) < 1e-10);
    if (!gs.degenerate_flag) {
      const long dim = 1L << n;
      double worst = 0.0;
      for (long x = 0; x < dim; ++x)
        worst = std::max(worst, std::abs(std::norm(gs.amplitudes(x)) - std::norm(gs.amplitudes(dim - 1 - x))));
      CHECK(worst < 1e-9);
    }
    const auto cp = capacity_point(spec);
    CHECK(cp.diag_entropy_bits >= 0.0);
    CHECK(cp.diag_entropy_bits <= n + 1e-9);
  }
}
