#include "samossa/ssa_estimator.hpp"

#include "samossa/errors.hpp"

#include <cmath>
#include <string>

namespace samossa {

Decomposition decompose(const TimePanel& panel, const StackedPage& page, const SvdResult& svd,
                        const RankRule& rule) {
  const auto& shape = page.shape;
  const auto k = select_rank(svd.singular_values, rule, shape.L, shape.columns());

  Decomposition out;
  out.L = shape.L;
  out.k_hat = k;
  out.origin = page.origin;
  out.t_first = panel.t0() + static_cast<long>(page.origin);
  out.spectrum = svd.singular_values;
  out.f_hat = unstack(hsvt(page.data, svd, k), shape);
  out.x_hat = panel.values().rightCols(shape.T_eff) - out.f_hat;
  return out;
}

Decomposition decompose(const TimePanel& panel, Eigen::Index L, const RankRule& rule) {
  const auto page = stack(panel, L);
  return decompose(panel, page, svd(page.data, SvdVectors::Left), rule);
}

double est_err(const Decomposition& d, const TimePanel& truth, Eigen::Index n) {
  if (truth.num_series() != d.num_series())
    throw ShapeError("truth panel has a different number of series");
  if (n < 0 || n >= d.num_series()) throw IndexError("series index " + std::to_string(n) + " out of range");
  const auto offset = d.t_first - truth.t0();
  if (offset < 0 || offset + d.length() > truth.length())
    throw ShapeError("truth panel does not cover the decomposition window");
  const auto diff = d.f_hat.row(n) - truth.values().row(n).segment(offset, d.length());
  return diff.squaredNorm() / static_cast<double>(d.length());
}

double spectrum_balance(const Decomposition& d) {
  const double k = static_cast<double>(d.k_hat);
  const double nt = static_cast<double>(d.num_series() * d.length());
  return d.spectrum(d.k_hat - 1) * std::sqrt(k) / std::sqrt(nt);
}

}  // namespace samossa
