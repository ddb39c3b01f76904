#include <algorithm>
#include <cmath>
#include <numeric>

#include "memchan/markov.hpp"
#include "support.hpp"

using namespace memchan;
using markov::StochasticMatrix;

namespace {

double h2(double p) { return -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

StochasticMatrix random_chain(std::mt19937_64& g, int d) {
  std::vector<std::vector<double>> cols;
  for (int j = 0; j < d; ++j) {
    std::vector<double> c(static_cast<std::size_t>(d));
    for (auto& x : c) x = testing::uniform(g, 0.05, 1.0);
    const double s = std::accumulate(c.begin(), c.end(), 0.0);
    for (auto& x : c) x /= s;
    cols.push_back(c);
  }
  return StochasticMatrix::from_columns(cols);
}

}  // namespace

TEST_CASE("irreducibility") {
  CHECK(markov::check_irreducible(StochasticMatrix::from_columns({{0, 1}, {1, 0}})));
  CHECK_FALSE(markov::check_irreducible(StochasticMatrix(Eigen::Matrix3d::Identity())));
  Eigen::Matrix3d up;
  up << 1, 0.5, 0.2, 0, 0.5, 0.3, 0, 0, 0.5;
  CHECK_FALSE(markov::check_irreducible(StochasticMatrix(up)));
}

TEST_CASE("row-stochastic input is rejected") {
  Eigen::Matrix2d rows;
  rows << 0.8, 0.2, 0.4, 0.6;
  CHECK_ERROR_KIND(StochasticMatrix(rows), ErrorKind::InvalidInput);
  CHECK_ERROR_KIND(StochasticMatrix::from_columns({{0.5, 0.6}, {0.5, 0.5}}), ErrorKind::InvalidInput);
  CHECK_ERROR_KIND(StochasticMatrix::from_columns({{1.2, -0.2}, {0.5, 0.5}}), ErrorKind::InvalidInput);
}

TEST_CASE("stationary vectors") {
  auto v = markov::stationary(StochasticMatrix::from_columns({{0, 1}, {1, 0}}));
  CHECK(v[0] == doctest::Approx(0.5));
  v = markov::stationary(StochasticMatrix::from_columns({{0.9, 0.1}, {0.1, 0.9}}));
  CHECK(v[1] == doctest::Approx(0.5));
  const auto m = StochasticMatrix::from_columns({{0.8, 0.2}, {0.4, 0.6}});
  v = markov::stationary(m);
  CHECK(v[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(v[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  const Eigen::Vector2d vv(v[0], v[1]);
  CHECK((m.matrix() * vv - vv).norm() < 1e-10);
  CHECK_ERROR_KIND(markov::stationary(StochasticMatrix(Eigen::Matrix2d::Identity())), ErrorKind::NoUniqueStationaryState);
}

TEST_CASE("entropy rate and capacity examples") {
  const auto perm = StochasticMatrix::from_columns({{0, 1}, {1, 0}});
  CHECK(markov::entropy_rate(perm) == 0.0);
  CHECK(markov::capacity(perm).capacity_bits == 1.0);
  const auto iid = StochasticMatrix::from_columns({{0.5, 0.5}, {0.5, 0.5}});
  CHECK(markov::entropy_rate(iid) == doctest::Approx(1.0));
  CHECK(std::abs(markov::capacity(iid).capacity_bits) < 1e-15);
  const auto bsc = StochasticMatrix::from_columns({{0.9, 0.1}, {0.1, 0.9}});
  CHECK(markov::entropy_rate(bsc) == doctest::Approx(0.4689956).epsilon(1e-7));
  const auto rep = markov::capacity(bsc);
  CHECK(std::abs(rep.capacity_bits - (1 - h2(0.1))) < 1e-12);
  CHECK(std::abs(rep.capacity_bits - 0.5310044) < 1e-7);
  CHECK(rep.column_entropies.size() == 2);
}

TEST_CASE("brute force path entropy") {
  const auto perm = StochasticMatrix::from_columns({{0, 1}, {1, 0}});
  CHECK(markov::brute_force_diag_entropy(perm, ProbDist({1.0, 0.0}), 8) == 0.0);
  const auto iid = StochasticMatrix::from_columns({{0.5, 0.5}, {0.5, 0.5}});
  CHECK(markov::brute_force_diag_entropy(iid, std::nullopt, 8) == doctest::Approx(8.0).epsilon(1e-12));
  const auto bsc = StochasticMatrix::from_columns({{0.9, 0.1}, {0.1, 0.9}});
  CHECK(markov::brute_force_diag_entropy(bsc, ProbDist({0.5, 0.5}), 12) ==
        doctest::Approx(1 + 11 * h2(0.1)).epsilon(1e-12));
  CHECK(std::abs(1 + 11 * h2(0.1) - 6.1589515) < 1e-7);
  CHECK_ERROR_KIND(markov::brute_force_diag_entropy(iid, std::nullopt, 25), ErrorKind::EnumerationTooLarge);
  const auto d3 = StochasticMatrix::from_columns({{0.2, 0.3, 0.5}, {0.3, 0.3, 0.4}, {0.1, 0.1, 0.8}});
  CHECK_ERROR_KIND(markov::brute_force_diag_entropy(d3, std::nullopt, 16), ErrorKind::EnumerationTooLarge);
}

TEST_CASE("property: stationary brute force increments equal the entropy rate") {
  auto& g = testing::rng(21);
  for (int t = 0; t < 10; ++t) {
    const auto m = random_chain(g, 2 + int(g() % 3));
    const double s7 = markov::brute_force_diag_entropy(m, std::nullopt, 7);
    const double s8 = markov::brute_force_diag_entropy(m, std::nullopt, 8);
    CHECK(std::abs((s8 - s7) - markov::entropy_rate(m)) < 1e-9);
  }
}

TEST_CASE("property: entropy rate bounds and relabeling invariance") {
  auto& g = testing::rng(22);
  for (int t = 0; t < 30; ++t) {
    const int d = 2 + int(g() % 3);
    const auto m = random_chain(g, d);
    const double r = markov::entropy_rate(m);
    CHECK(r >= 0.0);
    CHECK(r <= std::log2(double(d)) + 1e-12);
    std::vector<int> perm(static_cast<std::size_t>(d));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), g);
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i) p(perm[std::size_t(i)], i) = 1.0;
    const StochasticMatrix relabeled(p * m.matrix() * p.transpose());
    CHECK(std::abs(markov::capacity(relabeled).capacity_bits - markov::capacity(m).capacity_bits) < 1e-12);
    const auto rep = markov::capacity(m);
    CHECK(std::abs(rep.capacity_bits - (std::log2(double(d)) - rep.entropy_rate_bits)) < 1e-12);
  }
}
