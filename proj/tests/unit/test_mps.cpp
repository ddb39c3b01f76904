#include <cmath>
#include <complex>

#include "memchan/ising.hpp"
#include "memchan/mps.hpp"
#include "support.hpp"

using namespace memchan;
using mps::MPSSpec;
using cd = std::complex<double>;

namespace {

MPSSpec product_env() {
  Eigen::MatrixXcd q(1, 1);
  q(0, 0) = 1 / std::sqrt(2.0);
  return MPSSpec({q, q});
}

double slope_capacity(const MPSSpec& spec) {
  std::vector<Sample> pts;
  for (int n = 8; n <= 13; ++n) pts.push_back({double(n), mps::diag_entropy_bits(spec, n)});
  return 1.0 - entropy_rate_estimate(pts).slope;
}

// Traces out the last `k_out` qubits of a density matrix on `k` qubits.
Eigen::MatrixXcd trace_tail(const Eigen::MatrixXcd& rho, int k, int k_out) {
  const long keep = 1L << (k - k_out), drop = 1L << k_out;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(keep, keep);
  for (long i = 0; i < keep; ++i)
    for (long j = 0; j < keep; ++j)
      for (long r = 0; r < drop; ++r) out(i, j) += rho(i * drop + r, j * drop + r);
  return out;
}

void check_density(const Eigen::MatrixXcd& rho) {
  CHECK(std::abs(rho.trace() - cd(1.0)) < 1e-10);
  CHECK((rho - rho.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() > -1e-10);
}

}  // namespace

TEST_CASE("spec validation") {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(2, 2), b = Eigen::MatrixXcd::Identity(3, 3);
  CHECK_ERROR_KIND(MPSSpec({a, b}), ErrorKind::InvalidInput);
  CHECK_ERROR_KIND(MPSSpec({a}), ErrorKind::InvalidInput);
  const Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(2, 2);
  CHECK_ERROR_KIND(MPSSpec({z, z}), ErrorKind::InvalidInput);
}

TEST_CASE("diag distribution examples") {
  const auto u = mps::diag_distribution(product_env(), 6);
  for (double p : u.values()) CHECK(p == doctest::Approx(1.0 / 64));
  const Eigen::MatrixXcd h = Eigen::MatrixXcd::Identity(2, 2) / std::sqrt(2.0);
  const auto u2 = mps::diag_distribution(MPSSpec({h, h}), 5);
  for (double p : u2.values()) CHECK(p == doctest::Approx(1.0 / 32));
  const auto w0 = mps::diag_distribution(mps::wolf_mps(0.0), 4);
  CHECK(w0[0] == doctest::Approx(0.5));
  CHECK(w0[15] == doctest::Approx(0.5));
  double rest = 0.0;
  for (std::size_t i = 1; i < 15; ++i) rest += w0[i];
  CHECK(rest < 1e-14);
  CHECK_ERROR_KIND(mps::diag_distribution(mps::wolf_mps(0.5), 21), ErrorKind::EnumerationTooLarge);
}

TEST_CASE("Wolf g=0.5 enumeration agrees with the rank-1 route") {
  const double s10 = mps::diag_entropy_bits(mps::wolf_mps(0.5), 10);
  const double s9 = mps::diag_entropy_bits(mps::wolf_mps(0.5), 9);
  const double rate = ising::entropy_per_site(mps::ising_from_rank1({1, 1, 0.25})) * kLog2E;
  CHECK(std::abs((s10 - s9) - rate) < 1e-2);
  CHECK(std::abs(slope_capacity(mps::wolf_mps(0.5)) - mps::capacity_rank1({1, 1, 0.25})) < 1e-2);
}

TEST_CASE("rank-1 parameters") {
  for (double g : {0.0, 0.5, 1.0, 2.0}) {
    const auto p = mps::rank1_params(mps::wolf_mps(g));
    CHECK(p.a == doctest::Approx(1.0));
    CHECK(p.b == doctest::Approx(1.0));
    CHECK(p.c == doctest::Approx(g * g));
  }
  const auto p = mps::rank1_params(mps::canonical_rank1({0.3, 0.7, 0.2}));
  CHECK(p.a == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(p.b == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(p.c == doctest::Approx(0.2).epsilon(1e-12));
  Eigen::MatrixXcd full(2, 2), q1(2, 2), nil(2, 2);
  full << 1, 0, 0, 0.5;
  q1 << 0, 0, 1, 0;
  CHECK_ERROR_KIND(mps::rank1_params(MPSSpec({full, q1})), ErrorKind::NotRank1);
  nil << 0, 1, 0, 0;
  Eigen::MatrixXcd q0(2, 2);
  q0 << 1, 0, 0, 0;
  CHECK_ERROR_KIND(mps::rank1_params(MPSSpec({q0, nil})), ErrorKind::NilpotentSymbol);
}

TEST_CASE("Ising mapping of rank-1 parameters") {
  const auto z = mps::ising_from_rank1({1, 1, 1});
  CHECK(z.beta == 1.0);
  CHECK(std::abs(z.J) + std::abs(z.M) + std::abs(z.D) < 1e-15);
  const auto e = mps::ising_from_rank1({std::exp(2.0), 1, 1});
  CHECK(e.J == doctest::Approx(1.0));
  CHECK(e.M == doctest::Approx(1.0));
  CHECK(std::abs(e.coupling()) < 1e-15);
  const auto w = mps::ising_from_rank1({1, 1, 0.25});
  CHECK(w.coupling() == doctest::Approx(std::log(2.0) / 2));
  CHECK_ERROR_KIND(mps::ising_from_rank1({1, 1, 0}), ErrorKind::DeterministicLimit);
}

TEST_CASE("capacity of rank-1 environments") {
  CHECK(std::abs(mps::capacity_rank1({1, 1, 1})) < 1e-12);
  CHECK(mps::capacity_rank1({0.3, 0.9, 0}) == 1.0);
  CHECK(std::abs(mps::capacity_rank1({1, 1, 0.25}) - slope_capacity(mps::wolf_mps(0.5))) < 1e-2);
}

TEST_CASE("string probabilities follow a^l b^(N-l) c^K on the ring") {
  auto& g = testing::rng(41);
  for (int t = 0; t < 10; ++t) {
    const mps::Rank1Params p{testing::uniform(g, 0.2, 1), testing::uniform(g, 0.2, 1), testing::uniform(g, 0.05, 1)};
    const int n = 8;
    const auto dist = mps::diag_distribution(mps::canonical_rank1(p), n);
    std::vector<double> w(dist.size());
    for (std::size_t x = 0; x < w.size(); ++x) {
      int zeros = 0, k = 0;
      for (int i = 0; i < n; ++i) {
        const int si = int((x >> (n - 1 - i)) & 1), sn = int((x >> (n - 1 - (i + 1) % n)) & 1);
        zeros += si == 0;
        k += si == 0 && sn == 1;
      }
      w[x] = std::pow(p.a, zeros) * std::pow(p.b, n - zeros) * std::pow(p.c, k);
    }
    const auto expect = ProbDist::from_weights(w);
    for (std::size_t x = 0; x < w.size(); ++x) CHECK(std::abs(dist[x] - expect[x]) < 1e-12);
  }
}

TEST_CASE("Wolf symmetry, endpoints and divergent gradient") {
  for (int i = 1; i <= 19; ++i) {
    const double g = 0.1 * i;
    CHECK(std::abs(mps::wolf_capacity(g) - mps::wolf_capacity(-g)) < 1e-12);
  }
  CHECK(mps::wolf_capacity(0.0) == 1.0);
  CHECK(std::abs(mps::wolf_capacity(1.0)) < 1e-9);
  CHECK(std::abs(mps::wolf_capacity(-1.0)) < 1e-9);
  const double h = 1e-3;
  auto slope = [&](double g) { return std::abs(mps::wolf_capacity(g + h) - mps::wolf_capacity(g)) / h; };
  CHECK(slope(0.05) > slope(0.1));
  CHECK(slope(0.1) > slope(0.2));
  CHECK(slope(0.2) > slope(0.4));
}

TEST_CASE("transfer spectra") {
  const auto one = mps::transfer_spectrum(product_env());
  REQUIRE(one.moduli.size() == 1);
  CHECK(one.moduli[0] == doctest::Approx(1.0));
  CHECK(one.unique_fixed_point);
  const auto w1 = mps::transfer_spectrum(mps::wolf_mps(1.0));
  CHECK(w1.gap > 0.0);
  CHECK(w1.unique_fixed_point);
  const auto w0 = mps::transfer_spectrum(mps::wolf_mps(0.0));
  CHECK_FALSE(w0.unique_fixed_point);
  const auto w5 = mps::transfer_spectrum(mps::wolf_mps(0.5));
  CHECK(w5.moduli[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(w5.lambda1 == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("normalization and state vector") {
  const auto spec = mps::wolf_mps(0.5);
  CHECK(std::abs(mps::normalization(spec, 6) - cd(std::pow(1.5, 6) + std::pow(0.5, 6))) < 1e-10);
  const auto psi = mps::state_vector(spec, 8);
  CHECK(psi.norm() == doctest::Approx(1.0));
}

TEST_CASE("reduced block density matches dense partial trace") {
  const auto spec = mps::wolf_mps(0.5);
  mps::BlockLayout layout{3, 2, 2, 12};
  const std::vector<int> both{0, 1};
  const auto rho = mps::reduced_block_density(spec, layout, both);
  const auto dense = testing::dense_partial_trace(mps::state_vector(spec, 12), 12, 2, {0, 1, 2, 5, 6, 7});
  CHECK((rho - dense).cwiseAbs().maxCoeff() <= 1e-10);
  check_density(rho);
  const std::vector<int> first{0};
  const auto rho1 = mps::reduced_block_density(spec, layout, first);
  CHECK((trace_tail(rho, 6, 3) - rho1).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("whole-chain block is the pure MPS state") {
  const auto spec = mps::wolf_mps(2.0);
  mps::BlockLayout layout{6, 0, 1, 6};
  const std::vector<int> only{0};
  const auto rho = mps::reduced_block_density(spec, layout, only);
  const auto psi = mps::state_vector(spec, 6);
  CHECK((rho - psi * psi.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
  check_density(rho);
}

TEST_CASE("symbol-independent matrices give a maximally mixed diagonal") {
  const Eigen::MatrixXcd h = Eigen::MatrixXcd::Identity(2, 2) / std::sqrt(2.0);
  const std::vector<int> sites{1, 3, 4};
  const auto rho = mps::reduced_density(MPSSpec({h, h}), 7, sites);
  for (int i = 0; i < 8; ++i) CHECK(rho(i, i).real() == doctest::Approx(0.125));
}

TEST_CASE("deviations vanish where they must") {
  const auto spec = mps::wolf_mps(0.5);
  CHECK(mps::block_product_deviation(spec, {3, 2, 1, 10}) == 0.0);
  CHECK(mps::block_product_deviation(product_env(), {2, 1, 3, 9}) < 1e-12);
  CHECK(mps::longshort_deviation(spec, 4, 36, 40) == 0.0);
  CHECK(mps::longshort_deviation(product_env(), 4, 2, 20) < 1e-12);
  CHECK_ERROR_KIND(mps::longshort_deviation(spec, 11, 2, 40), ErrorKind::InvalidInput);
  CHECK_ERROR_KIND(mps::block_product_deviation(spec, {7, 1, 2, 16}), ErrorKind::EnumerationTooLarge);
}

TEST_CASE("block deviations decay at the rate of the second transfer eigenvalue") {
  const auto spec = mps::wolf_mps(0.5);
  std::vector<Sample> pts;
  for (int s = 1; s <= 6; ++s) pts.push_back({double(s), mps::block_product_deviation(spec, {3, s, 2, 2 * (3 + s)})});
  const auto fit = fit_exponential_decay(pts);
  CHECK(std::abs(fit.rate / std::log(1.0 / 3.0) - 1.0) < 0.2);
}

TEST_CASE("property: gauge invariance of the diagonal entropy") {
  auto& g = testing::rng(42);
  for (int t = 0; t < 15; ++t) {
    std::vector<Eigen::MatrixXcd> qs;
    for (int k = 0; k < 2; ++k) qs.push_back(Eigen::MatrixXcd::Random(2, 2) + cd(testing::uniform(g, 0, 1)) * Eigen::MatrixXcd::Identity(2, 2));
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Identity(2, 2);
    s(0, 1) = cd(testing::uniform(g, -1, 1), testing::uniform(g, -1, 1));
    s(1, 0) = cd(testing::uniform(g, -0.5, 0.5), 0);
    const Eigen::MatrixXcd si = s.inverse();
    std::vector<Eigen::MatrixXcd> gauged;
    for (const auto& q : qs) gauged.push_back(s * q * si);
    const double a = mps::diag_entropy_bits(MPSSpec(qs), 8);
    const double b = mps::diag_entropy_bits(MPSSpec(gauged), 8);
    CHECK(std::abs(a - b) <= 1e-9);
  }
}

TEST_CASE("property: diag distributions are valid for random specs") {
  for (int t = 0; t < 15; ++t) {
    std::vector<Eigen::MatrixXcd> qs{Eigen::MatrixXcd::Random(2, 2), Eigen::MatrixXcd::Random(2, 2),
                                     Eigen::MatrixXcd::Random(2, 2)};
    const MPSSpec spec(qs);
    const auto p = mps::diag_distribution(spec, 6);
    double total = 0.0;
    for (double x : p.values()) {
      CHECK(x >= 0.0);
      total += x;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    const std::vector<int> sites{0, 2, 3};
    check_density(mps::reduced_density(spec, 7, sites));
  }
}

TEST_CASE("property: rank-1 two-route agreement") {
  auto& g = testing::rng(43);
  for (int t = 0; t < 4; ++t) {
    const mps::Rank1Params p{testing::uniform(g, 0.2, 1), testing::uniform(g, 0.2, 1), testing::uniform(g, 0.05, 1)};
    CHECK(std::abs(slope_capacity(mps::canonical_rank1(p)) - mps::capacity_rank1(p)) < 1e-2);
  }
}
