#include "samossa/linear_forecaster.hpp"

#include "samossa/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace samossa {

BetaModel fit_beta(const StackedPage& page, Eigen::Index k_hat) {
  const auto L = page.shape.L;
  if (L < 2) throw FitError("fit_beta needs L >= 2");
  if (k_hat < 1) throw RankError("fit_beta needs k_hat >= 1");

  const Eigen::MatrixXd features = page.data.topRows(L - 1);
  const Eigen::VectorXd targets = page.data.row(L - 1).transpose();

  // F_hat = U_k S_k V_k^T; the minimum-norm solution of F_hat^T b = targets is
  // U_k S_k^{-1} V_k^T targets, with tiny singular values dropped.
  const auto dec = svd(features, SvdVectors::Both);
  const auto& s = dec.singular_values;
  if (s.size() == 0 || !(s(0) > 0.0)) throw FitError("degenerate design: truncated features are all zero");
  const auto k = std::min<Eigen::Index>(k_hat, s.size());

  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(L - 1);
  const double cutoff = kPinvRelativeCutoff * s(0);
  for (Eigen::Index l = 0; l < k && s(l) > cutoff; ++l)
    coeffs += dec.left_vectors.col(l) * (dec.right_vectors.col(l).dot(targets) / s(l));

  const Eigen::MatrixXd truncated = hsvt(features, dec, k);
  const Eigen::VectorXd residual = targets - truncated.transpose() * coeffs;

  BetaModel model;
  model.L = L;
  model.k_hat = k;
  // Page rows run oldest to newest; the model is stored most recent first.
  model.beta = coeffs.reverse();
  model.residual_rms = std::sqrt(residual.squaredNorm() / static_cast<double>(targets.size()));
  if (!model.beta.allFinite()) throw FitError("non-finite beta estimate");
  return model;
}

BetaModel fit_beta(const TimePanel& panel, Eigen::Index L, const RankRule& rule) {
  if (L < 2) throw FitError("fit_beta needs L >= 2");
  const auto page = stack(panel, L);
  const auto spectrum = svd(page.data, SvdVectors::None).singular_values;
  return fit_beta(page, select_rank(spectrum, rule, page.shape.L, page.shape.columns()));
}

double forecast_f(const BetaModel& model, std::span<const double> lags) {
  if (static_cast<Eigen::Index>(lags.size()) != model.beta.size())
    throw ShapeError("forecast_f expects " + std::to_string(model.beta.size()) + " lags, got " +
                     std::to_string(lags.size()));
  const Eigen::Map<const Eigen::VectorXd> v(lags.data(), model.beta.size());
  return model.beta.dot(v);
}

}  // namespace samossa
