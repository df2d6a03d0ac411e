#include "samossa/ar.hpp"

#include "samossa/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace samossa {

namespace {

std::complex<double> int_pow(std::complex<double> base, Eigen::Index exponent) {
  std::complex<double> out = 1.0;
  for (Eigen::Index i = 0; i < exponent; ++i) out *= base;
  return out;
}

}  // namespace

ArModel fit_ar(std::span<const double> residuals, Eigen::Index p) {
  if (p < 0) throw FitError("AR order must be non-negative");
  const auto T = static_cast<Eigen::Index>(residuals.size());
  if (T < 2 * p + 1)
    throw FitError("AR(" + std::to_string(p) + ") needs at least " + std::to_string(2 * p + 1) +
                   " residuals, got " + std::to_string(T));
  const Eigen::Map<const Eigen::VectorXd> x(residuals.data(), T);

  ArModel model;
  model.p = p;
  if (p == 0) {
    model.alpha.resize(0);
    model.noise_var = x.squaredNorm() / static_cast<double>(T);
    return model;
  }

  // Row r predicts x[p + r] from (x[p + r - 1], ..., x[r]).
  const auto rows = T - p;
  Eigen::MatrixXd design(rows, p);
  for (Eigen::Index i = 0; i < p; ++i) design.col(i) = x.segment(p - 1 - i, rows);
  const Eigen::VectorXd target = x.tail(rows);

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(design);
  model.alpha = cod.solve(target);
  model.rank_deficient = cod.rank() < p;
  model.noise_var = (target - design * model.alpha).squaredNorm() / static_cast<double>(rows);
  if (!model.alpha.allFinite()) throw FitError("non-finite AR estimate");
  return model;
}

double forecast_ar(const ArModel& model, std::span<const double> lags) {
  if (static_cast<Eigen::Index>(lags.size()) != model.p)
    throw ShapeError("forecast_ar expects " + std::to_string(model.p) + " lags, got " +
                     std::to_string(lags.size()));
  if (model.p == 0) return 0.0;
  const Eigen::Map<const Eigen::VectorXd> v(lags.data(), model.p);
  return model.alpha.dot(v);
}

Eigen::MatrixXd companion_matrix(const Eigen::VectorXd& alpha) {
  const auto p = alpha.size();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(p, p);
  if (p == 0) return A;
  A.row(0) = alpha.transpose();
  if (p > 1) A.bottomLeftCorner(p - 1, p - 1).setIdentity();
  return A;
}

Eigen::VectorXd input_vector(Eigen::Index p) {
  Eigen::VectorXd B = Eigen::VectorXd::Zero(p);
  if (p > 0) B(0) = 1.0;
  return B;
}

Eigen::VectorXcd characteristic_roots(const Eigen::VectorXd& alpha) {
  const auto p = alpha.size();
  if (p == 0) return {};
  Eigen::VectorXcd roots;
  if (p == 1) {
    roots = Eigen::VectorXcd::Constant(1, alpha(0));
  } else {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion_matrix(alpha), false);
    roots = solver.eigenvalues();
  }
  std::vector<std::complex<double>> sorted(roots.data(), roots.data() + p);
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  return Eigen::Map<Eigen::VectorXcd>(sorted.data(), p);
}

Eigen::MatrixXd solve_discrete_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q,
                                        double radius) {
  if (!(radius < 1.0)) throw NonStationaryError("Lyapunov iteration needs spectral radius < 1");
  // Q + A Q A^T + A^2 Q (A^T)^2 + ...; terms shrink like radius^{2t}.
  long cap = static_cast<long>(A.rows()) + 2;
  if (radius > 0.0)
    cap = std::max(cap, static_cast<long>(std::ceil(10.0 * std::log(kLyapunovTolerance) /
                                                    std::log(radius * radius))));
  Eigen::MatrixXd P = Q;
  for (long it = 0; it < cap; ++it) {
    Eigen::MatrixXd next = A * P * A.transpose() + Q;
    const double change = (next - P).cwiseAbs().maxCoeff();
    P = std::move(next);
    if (change < kLyapunovTolerance) break;
  }
  return P;
}

ArDiagnostics diagnostics(const ArModel& model, double sigma, Eigen::Index K) {
  const auto p = model.p;
  if (p < 1) throw FitError("diagnostics need an AR order >= 1");
  ArDiagnostics d;
  d.sigma = sigma < 0.0 ? std::sqrt(model.noise_var) : sigma;
  d.companion = companion_matrix(model.alpha);
  d.roots = characteristic_roots(model.alpha);
  d.lambda_star = std::abs(d.roots(0));
  if (!(d.lambda_star < 1.0))
    throw NonStationaryError("largest characteristic root has modulus " +
                             std::to_string(d.lambda_star) + " >= 1");
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = i + 1; j < p; ++j)
      if (std::abs(d.roots(i) - d.roots(j)) < kRootSeparation)
        throw DegenerateRootsError("characteristic roots " + std::to_string(i + 1) + " and " +
                                   std::to_string(j + 1) + " coincide");

  // a_i = prod_{j != i} (1 - l_j / l_i)^{-1} = l_i^{p-1} / prod_{j != i} (l_i - l_j),
  // the second form being defined at l_i = 0 as well.
  d.partial_fractions.resize(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    const std::complex<double> num = int_pow(d.roots(i), p - 1);
    std::complex<double> den = 1.0;
    for (Eigen::Index j = 0; j < p; ++j)
      if (j != i) den *= d.roots(i) - d.roots(j);
    d.partial_fractions(i) = num / den;
  }
  d.c_lambda = d.partial_fractions.cwiseAbs().sum();
  d.sigma_x = d.c_lambda * d.sigma / (1.0 - d.lambda_star);

  d.ma_coeffs.resize(K);
  Eigen::VectorXcd powers = Eigen::VectorXcd::Ones(p);
  for (Eigen::Index k = 0; k < K; ++k) {
    d.ma_coeffs(k) = d.partial_fractions.cwiseProduct(powers).sum().real();
    powers = powers.cwiseProduct(d.roots);
  }

  const auto B = input_vector(p);
  d.gramian_psi = solve_discrete_lyapunov(d.companion, B * B.transpose(), d.lambda_star);
  d.gramian_gamma =
      solve_discrete_lyapunov(d.companion, Eigen::MatrixXd::Identity(p, p), d.lambda_star);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> psi(d.gramian_psi, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gamma(d.gramian_gamma, Eigen::EigenvaluesOnly);
  d.psi_min_eigenvalue = psi.eigenvalues().minCoeff();
  d.psi_max_eigenvalue = psi.eigenvalues().maxCoeff();
  d.gamma_max_eigenvalue = gamma.eigenvalues().maxCoeff();
  d.identification_threshold =
      d.sigma * d.sigma * d.psi_min_eigenvalue / (6.0 * static_cast<double>(p));
  return d;
}

}  // namespace samossa
