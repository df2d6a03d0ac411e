#include "samossa/errors.hpp"
#include "samossa/lowrank.hpp"

#include "support.hpp"

#include <Eigen/Dense>
#include <random>

using namespace samossa;

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index r, Eigen::Index c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = d(rng);
  return m;
}

Eigen::VectorXd spectrum(std::initializer_list<double> values) {
  Eigen::VectorXd s(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) s(i++) = v;
  return s;
}

}  // namespace

TEST_CASE("svd matches the reference decomposition") {
  const auto& o = test::oracles()["lowrank_small"];
  const auto a = test::matrix(o["matrix"]);
  const auto r = svd(a);
  CHECK(test::max_abs_diff(r.singular_values, test::vector(o["singular_values"])) < 1e-12);
  const Eigen::MatrixXd rebuilt = r.left_vectors * r.singular_values.asDiagonal() * r.right_vectors.transpose();
  CHECK(test::relative_diff(rebuilt, a) < 1e-10);
  CHECK(test::max_abs_diff(r.left_vectors.transpose() * r.left_vectors, Eigen::MatrixXd::Identity(5, 5)) < 1e-12);
}

TEST_CASE("hsvt matches the reference truncation") {
  const auto& o = test::oracles()["lowrank_small"];
  const auto a = test::matrix(o["matrix"]);
  const auto k = o["hsvt_k"].get<Eigen::Index>();
  const auto h = hsvt(a, k);
  CHECK(test::max_abs_diff(h, test::matrix(o["hsvt"])) < 1e-12);
  CHECK((a - h).norm() == doctest::Approx(o["hsvt_frobenius_error"].get<double>()).epsilon(1e-10));
  CHECK(test::max_abs_diff(hsvt(a, svd(a, SvdVectors::Left), k), h) < 1e-12);
}

TEST_CASE("hsvt examples") {
  Eigen::MatrixXd r1(2, 2);
  r1 << 1, 2, 2, 4;
  CHECK(test::max_abs_diff(hsvt(r1, 1), r1) <= 1e-12);

  const auto a = random_matrix(6, 4, 3);
  CHECK(test::max_abs_diff(hsvt(a, 4), a) < 1e-12);

  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
  d(0, 0) = 3;
  d(1, 1) = 1;
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(2, 2);
  expected(0, 0) = 3;
  CHECK(test::max_abs_diff(hsvt(d, 1), expected) < 1e-15);

  CHECK_THROWS_AS(hsvt(a, 0), RankError);
  CHECK_THROWS_AS(hsvt(a, 5), RankError);
}

TEST_CASE("Eckart-Young error and idempotence on random matrices") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Eigen::Index r = 5 + static_cast<Eigen::Index>(seed % 7);
    const Eigen::Index c = 4 + static_cast<Eigen::Index>((seed * 3) % 11);
    const auto a = random_matrix(r, c, seed);
    const auto s = svd(a, SvdVectors::None).singular_values;
    for (Eigen::Index k = 1; k <= std::min(r, c); ++k) {
      const auto h = hsvt(a, k);
      const double tail = std::sqrt(s.tail(s.size() - k).squaredNorm());
      CHECK((a - h).norm() == doctest::Approx(tail).epsilon(1e-8).scale(s(0)));
      CHECK(test::max_abs_diff(hsvt(h, k), h) < 1e-10);
      const auto sh = svd(h, SvdVectors::None).singular_values;
      if (k < sh.size()) CHECK(sh(k) < 1e-10 * sh(0));
    }
  }
}

TEST_CASE("select_rank examples") {
  CHECK(select_rank(spectrum({10, 1, 0.1}), RankRule::energy(0.9), 3, 3) == 1);
  CHECK(select_rank(spectrum({5, 5}), RankRule::energy(1.0), 2, 2) == 2);
  for (const auto& rule : {RankRule::fixed(1), RankRule::fixed(3), RankRule::energy(0.5), RankRule::energy(1.0),
                           RankRule::universal()})
    CHECK(select_rank(spectrum({5, 0, 0}), rule, 3, 3) == 1);
  CHECK_THROWS_AS(select_rank(spectrum({0, 0}), RankRule::fixed(1), 2, 2), RankError);
  CHECK_THROWS_AS(select_rank(Eigen::VectorXd(), RankRule::fixed(1), 2, 2), RankError);
}

TEST_CASE("select_rank against reference rules") {
  const auto& o = test::oracles()["rank_rules"];
  const auto a = test::matrix(o["matrix"]);
  const auto s = svd(a, SvdVectors::None).singular_values;
  const double beta = static_cast<double>(a.rows()) / static_cast<double>(a.cols());
  CHECK(universal_threshold_coefficient(beta) == doctest::Approx(o["universal_coefficient"].get<double>()).epsilon(1e-14));
  CHECK(select_rank(s, RankRule::universal(), a.rows(), a.cols()) == o["universal_k"].get<Eigen::Index>());
  CHECK(select_rank(s, RankRule::energy(o["energy_fraction"]), a.rows(), a.cols()) == o["energy_k"].get<Eigen::Index>());
  CHECK(select_rank(s, RankRule::energy(o["energy_fraction_high"]), a.rows(), a.cols()) ==
        o["energy_k_high"].get<Eigen::Index>());
  // the rule is symmetric in the aspect ratio
  CHECK(select_rank(s, RankRule::universal(), a.cols(), a.rows()) == o["universal_k"].get<Eigen::Index>());
}

TEST_CASE("select_rank properties") {
  SUBCASE("energy rule is monotone in the fraction") {
    const auto s = svd(random_matrix(20, 30, 11), SvdVectors::None).singular_values;
    Eigen::Index last = 0;
    for (double f = 0.05; f <= 1.0; f += 0.05) {
      const auto k = select_rank(s, RankRule::energy(f), 20, 30);
      CHECK(k >= last);
      last = k;
    }
  }
  SUBCASE("fixed rule is clamped to the positive values") {
    CHECK(select_rank(spectrum({3, 2, 0}), RankRule::fixed(3), 3, 3) == 2);
    CHECK(select_rank(spectrum({3, 2, 1}), RankRule::fixed(2), 3, 3) == 2);
  }
  SUBCASE("tied values are never split") {
    CHECK(select_rank(spectrum({4, 2, 2, 1}), RankRule::fixed(2), 4, 4) == 3);
    CHECK(select_rank(spectrum({2, 2, 2}), RankRule::energy(0.1), 3, 3) == 3);
  }
  SUBCASE("universal rule keeps at least one value") {
    CHECK(select_rank(spectrum({1, 1, 1, 1}), RankRule::universal(), 4, 4) == 4);
    CHECK(select_rank(spectrum({1.0, 0.99, 0.98, 0.97}), RankRule::universal(), 4, 4) == 1);
  }
}

TEST_CASE("rank rule text form") {
  CHECK(RankRule::parse("fixed:5") == RankRule::fixed(5));
  CHECK(RankRule::parse("energy:0.9") == RankRule::energy(0.9));
  CHECK(RankRule::parse("universal") == RankRule::universal());
  for (const auto& r : {RankRule::fixed(7), RankRule::energy(0.95), RankRule::universal()})
    CHECK(RankRule::parse(r.to_string()) == r);
  CHECK_THROWS_AS(RankRule::parse("fixed:0"), RankError);
  CHECK_THROWS_AS(RankRule::parse("energy:1.5"), RankError);
  CHECK_THROWS_AS(RankRule::parse("energy:0"), RankError);
  CHECK_THROWS_AS(RankRule::parse("best"), RankError);
  CHECK_THROWS_AS(RankRule::parse("fixed:two"), RankError);
}

TEST_CASE("universal threshold coefficient") {
  CHECK(universal_threshold_coefficient(1.0) == doctest::Approx(0.56 - 0.95 + 1.82 + 1.43));
  CHECK(universal_threshold_coefficient(0.5) == doctest::Approx(0.56 * 0.125 - 0.95 * 0.25 + 0.91 + 1.43));
}

TEST_CASE("svd is deterministic") {
  const auto a = random_matrix(40, 25, 5);
  const auto r1 = svd(a);
  const auto r2 = svd(a);
  CHECK(r1.singular_values == r2.singular_values);
  CHECK(r1.left_vectors == r2.left_vectors);
}
