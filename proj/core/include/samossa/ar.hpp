#pragma once

#include <Eigen/Core>

#include <complex>
#include <span>

namespace samossa {

/// x(t) = sum_{i=1..p} alpha(i-1) x(t-i) + eta(t). Order 0 is the zero
/// forecaster (empty alpha).
struct ArModel {
  Eigen::VectorXd alpha;
  Eigen::Index p = 0;
  /// Residual mean square of the fit.
  double noise_var = 0.0;
  /// Set when the lagged design was rank deficient and the minimum-norm
  /// solution was returned.
  bool rank_deficient = false;
};

/// Ordinary least squares on consecutive residuals. Needs at least 2p+1 values.
ArModel fit_ar(std::span<const double> residuals, Eigen::Index p);

/// alpha^T lags with lags most recent first (x(t-1), ..., x(t-p)).
double forecast_ar(const ArModel& model, std::span<const double> lags);

/// First row alpha, identity on the sub-diagonal.
Eigen::MatrixXd companion_matrix(const Eigen::VectorXd& alpha);
/// e_1 of length p.
Eigen::VectorXd input_vector(Eigen::Index p);

/// Roots of z^p - sum_i alpha_i z^{p-i}, by modulus descending (ties broken
/// by real part, then imaginary part, descending).
Eigen::VectorXcd characteristic_roots(const Eigen::VectorXd& alpha);

struct ArDiagnostics {
  Eigen::MatrixXd companion;
  Eigen::VectorXcd roots;
  double lambda_star = 0.0;
  /// Partial-fraction weights a_i of the MA(inf) expansion.
  Eigen::VectorXcd partial_fractions;
  double c_lambda = 0.0;
  double sigma = 0.0;
  double sigma_x = 0.0;
  /// sum_t A^t B B^T (A^T)^t
  Eigen::MatrixXd gramian_psi;
  /// sum_t A^t (A^T)^t
  Eigen::MatrixXd gramian_gamma;
  double psi_min_eigenvalue = 0.0;
  double psi_max_eigenvalue = 0.0;
  double gamma_max_eigenvalue = 0.0;
  /// beta_0 .. beta_{K-1}
  Eigen::VectorXd ma_coeffs;
  /// sigma^2 * lambda_min(Psi) / (6 p): the estimation-error level below
  /// which the identification guarantee applies.
  double identification_threshold = 0.0;
};

/// Stationarity analysis of a fitted model. `sigma` is the innovation
/// standard deviation (pass a negative value to use sqrt(model.noise_var)).
ArDiagnostics diagnostics(const ArModel& model, double sigma = -1.0, Eigen::Index K = 50);

/// Fixed point of P = A P A^T + Q by iteration, for spectral radius < 1.
Eigen::MatrixXd solve_discrete_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q,
                                        double radius);

inline constexpr double kLyapunovTolerance = 1e-12;
inline constexpr double kRootSeparation = 1e-9;

}  // namespace samossa
