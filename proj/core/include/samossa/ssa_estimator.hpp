#pragma once

#include "samossa/lowrank.hpp"
#include "samossa/pagemat.hpp"
#include "samossa/panel.hpp"

#include <Eigen/Core>

namespace samossa {

/// Stage-one output over the retained window of a panel. Columns of `f_hat`
/// and `x_hat` correspond to absolute times `t_first .. t_first + T_eff - 1`.
/// The dropped prefix (`origin` leading observations) carries no estimate.
struct Decomposition {
  Eigen::MatrixXd f_hat;
  Eigen::MatrixXd x_hat;
  Eigen::Index L = 0;
  Eigen::Index k_hat = 0;
  Eigen::Index origin = 0;
  long t_first = 1;
  /// Singular values of the stacked Page matrix of the observations.
  Eigen::VectorXd spectrum;

  Eigen::Index num_series() const { return f_hat.rows(); }
  Eigen::Index length() const { return f_hat.cols(); }
};

Decomposition decompose(const TimePanel& panel, Eigen::Index L, const RankRule& rule);

/// Same as above, reusing an already computed SVD (with left vectors) of the
/// stacked Page matrix `page`.
Decomposition decompose(const TimePanel& panel, const StackedPage& page, const SvdResult& svd,
                        const RankRule& rule);

/// Mean squared error of f_hat against `truth` for 0-based series `n`, over
/// the retained window. `truth` must cover that window.
double est_err(const Decomposition& decomposition, const TimePanel& truth, Eigen::Index n);

/// s_k * sqrt(k) / sqrt(N * T_eff): the balanced-spectrum constant implied by
/// the selected rank. Reported as a diagnostic only.
double spectrum_balance(const Decomposition& decomposition);

}  // namespace samossa
