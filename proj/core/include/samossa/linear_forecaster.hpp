#pragma once

#include "samossa/lowrank.hpp"
#include "samossa/pagemat.hpp"
#include "samossa/panel.hpp"

#include <Eigen/Core>

#include <span>

namespace samossa {

/// Linear recurrence for the deterministic component. `beta(i)` multiplies
/// the observation i+1 steps back, i.e. lags are ordered most recent first:
///   f_hat(t) = sum_i beta(i) * y(t - 1 - i),  i = 0 .. L-2.
struct BetaModel {
  Eigen::VectorXd beta;
  Eigen::Index L = 0;
  Eigen::Index k_hat = 0;
  /// RMS of the in-sample regression residual on the last Page row.
  double residual_rms = 0.0;
};

/// Regresses the last row of the stacked Page matrix on the rank-k_hat
/// truncation of its first L-1 rows (minimum-norm least squares). k_hat is
/// chosen by `rule` on the full stacked matrix.
BetaModel fit_beta(const TimePanel& panel, Eigen::Index L, const RankRule& rule);

/// Same regression with an explicit rank (clamped to the sub-matrix's
/// numerically positive spectrum).
BetaModel fit_beta(const StackedPage& page, Eigen::Index k_hat);

/// beta^T lags, lags most recent first; exactly L-1 of them.
double forecast_f(const BetaModel& model, std::span<const double> lags);

/// Singular values below this fraction of the largest are treated as zero
/// in the pseudo-inverse.
inline constexpr double kPinvRelativeCutoff = 1e-10;

}  // namespace samossa
