#include "samossa/errors.hpp"
#include "samossa/linear_forecaster.hpp"
#include "samossa/synth.hpp"

#include "support.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

using namespace samossa;

namespace {

std::vector<double> lags_before(const Eigen::MatrixXd& values, Eigen::Index n, Eigen::Index t, Eigen::Index count) {
  std::vector<double> out;
  for (Eigen::Index i = 1; i <= count; ++i) out.push_back(values(n, t - i));
  return out;
}

}  // namespace

TEST_CASE("fit_beta matches the reference regression") {
  const auto& o = test::oracles()["decompose"];
  const TimePanel panel(test::matrix(o["panel"]));
  const auto model = fit_beta(panel, o["L"], RankRule::fixed(o["k"]));
  CHECK(model.L == o["L"].get<Eigen::Index>());
  CHECK(model.k_hat == o["k"].get<Eigen::Index>());
  CHECK(test::max_abs_diff(model.beta, test::vector(o["beta_most_recent_first"])) < 1e-10);
}

TEST_CASE("constant panel") {
  const auto model = fit_beta(TimePanel(Eigen::MatrixXd::Ones(2, 30)), 2, RankRule::fixed(1));
  REQUIRE(model.beta.size() == 1);
  CHECK(model.beta(0) == doctest::Approx(1.0).epsilon(1e-14));
  const std::vector<double> lag{1.0};
  CHECK(forecast_f(model, lag) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("geometric series") {
  const double lambda = 0.97;
  Eigen::MatrixXd v(1, 200);
  for (Eigen::Index t = 0; t < 200; ++t) v(0, t) = std::pow(lambda, static_cast<double>(t + 1));
  const auto model = fit_beta(TimePanel(v), 2, RankRule::fixed(1));
  CHECK(model.beta(0) == doctest::Approx(lambda).epsilon(1e-12));
  CHECK(model.residual_rms < 1e-12);
}

TEST_CASE("noiseless sinusoid agrees with the minimum-norm exact recursion") {
  const Eigen::Index T = 400, L = 8;
  Eigen::MatrixXd v(2, T + 50);
  for (Eigen::Index t = 0; t < T + 50; ++t) {
    const double g = std::sin(2 * std::numbers::pi * (t + 1) / 23.0 + 0.4);
    v(0, t) = 1.5 * g;
    v(1, t) = -0.7 * g;
  }
  const TimePanel train(Eigen::MatrixXd(v.leftCols(T)));
  const auto model = fit_beta(train, L, RankRule::fixed(2));
  CHECK(model.residual_rms < 1e-8);

  // beta* solves (Z'_f)^T b = last row with the smallest norm
  const auto page = stack(train, L);
  const Eigen::MatrixXd features = page.data.topRows(L - 1).transpose();
  const Eigen::VectorXd targets = page.data.row(L - 1).transpose();
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(features);
  cod.setThreshold(1e-10);
  const Eigen::VectorXd beta_star = cod.solve(targets).reverse();

  for (Eigen::Index t = T; t < T + 50; ++t)
    for (Eigen::Index n = 0; n < 2; ++n) {
      const auto lags = lags_before(v, n, t, L - 1);
      const Eigen::Map<const Eigen::VectorXd> lv(lags.data(), L - 1);
      CHECK(forecast_f(model, lags) == doctest::Approx(beta_star.dot(lv)).epsilon(1e-8).scale(1.0));
      CHECK(std::abs(forecast_f(model, lags) - v(n, t)) < 1e-8);
    }
}

TEST_CASE("noiseless generator panels forecast a held-out window") {
  const Eigen::Index T = 1000, N = 10;
  auto spec = GeneratorSpec::estimation(0.3, N, 2 * T, 3);
  spec.noise_var = 0.0;
  const auto data = generate(spec);
  const TimePanel train = data.f.slice(0, T);
  const auto L = default_L(N, T);
  const auto model = fit_beta(train, L, RankRule::fixed(6));
  const auto& f = data.f.values();
  const double scale = f.cwiseAbs().maxCoeff();
  double worst = 0.0;
  for (Eigen::Index t = T; t < 2 * T; ++t)
    for (Eigen::Index n = 0; n < N; ++n)
      worst = std::max(worst, std::abs(forecast_f(model, lags_before(f, n, t, L - 1)) - f(n, t)));
  CHECK(worst < 1e-6 * scale);
}

TEST_CASE("beta does not depend on the series order") {
  const auto data = generate(GeneratorSpec::estimation(0.6, 6, 600, 9));
  Eigen::MatrixXd permuted(6, 600);
  const std::vector<Eigen::Index> order{3, 0, 5, 1, 4, 2};
  for (Eigen::Index n = 0; n < 6; ++n) permuted.row(n) = data.y.values().row(order[static_cast<std::size_t>(n)]);
  for (const auto& rule : {RankRule::fixed(6), RankRule::energy(0.9)}) {
    const auto a = fit_beta(data.y, 40, rule);
    const auto b = fit_beta(TimePanel(permuted), 40, rule);
    CHECK(test::max_abs_diff(a.beta, b.beta) < 1e-10);
  }
}

TEST_CASE("forecast_f examples") {
  BetaModel m;
  m.L = 2;
  m.beta = Eigen::VectorXd::Constant(1, 1.0);
  CHECK(forecast_f(m, std::vector<double>{3.7}) == 3.7);

  m.L = 4;
  m.beta = Eigen::VectorXd::Zero(3);
  CHECK(forecast_f(m, std::vector<double>{1.0, -2.0, 8.0}) == 0.0);

  m.L = 3;
  m.beta = Eigen::Vector2d(0.5, 0.5);
  CHECK(forecast_f(m, std::vector<double>{2.0, 4.0}) == 3.0);
  CHECK_THROWS_AS(forecast_f(m, std::vector<double>{2.0}), ShapeError);
}

TEST_CASE("lag order is most recent first") {
  // y(t) = 2 y(t-1) - y(t-2) is a straight line; beta = (2, -1)
  Eigen::MatrixXd v(1, 60);
  for (Eigen::Index t = 0; t < 60; ++t) v(0, t) = 3.0 + 0.5 * static_cast<double>(t);
  const auto model = fit_beta(TimePanel(v), 3, RankRule::fixed(2));
  CHECK(forecast_f(model, std::vector<double>{v(0, 59), v(0, 58)}) == doctest::Approx(3.0 + 0.5 * 60).epsilon(1e-10));
  CHECK(model.beta(0) == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(model.beta(1) == doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("fit_beta errors") {
  CHECK_THROWS_AS(fit_beta(TimePanel(Eigen::MatrixXd::Ones(1, 10)), 1, RankRule::fixed(1)), FitError);
  const auto page = stack(Eigen::MatrixXd(Eigen::MatrixXd::Zero(1, 12)), 3);
  CHECK_THROWS_AS(fit_beta(page, 1), FitError);
  CHECK_THROWS_AS(fit_beta(page, 0), RankError);
}
