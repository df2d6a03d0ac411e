#include "samossa/pagemat.hpp"

#include "samossa/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace samossa {

PageShape page_shape(Eigen::Index N, Eigen::Index T, Eigen::Index L) {
  if (N < 1) throw ShapeError("stacked Page matrix needs N >= 1");
  if (L < 1 || L > T)
    throw ShapeError("segment length L=" + std::to_string(L) + " must satisfy 1 <= L <= T=" +
                     std::to_string(T));
  const auto M = T / L;
  return {L, M, N, L * M};
}

StackedPage stack(const Eigen::MatrixXd& rows, Eigen::Index L) {
  const auto shape = page_shape(rows.rows(), rows.cols(), L);
  const auto origin = rows.cols() - shape.T_eff;
  StackedPage page{shape, origin, Eigen::MatrixXd(shape.L, shape.columns())};
  for (Eigen::Index n = 0; n < shape.N; ++n)
    for (Eigen::Index j = 0; j < shape.M; ++j)
      page.data.col(n * shape.M + j) = rows.row(n).segment(origin + j * L, L).transpose();
  return page;
}

StackedPage stack(const TimePanel& panel, Eigen::Index L) { return stack(panel.values(), L); }

StackedPage page_matrix(std::span<const double> series, Eigen::Index L) {
  const Eigen::Map<const Eigen::RowVectorXd> row(series.data(),
                                                 static_cast<Eigen::Index>(series.size()));
  return stack(Eigen::MatrixXd(row), L);
}

Eigen::MatrixXd unstack(const Eigen::MatrixXd& page, const PageShape& shape) {
  if (page.rows() != shape.L || page.cols() != shape.columns())
    throw ShapeError("matrix does not match the stacked Page shape");
  Eigen::MatrixXd rows(shape.N, shape.T_eff);
  for (Eigen::Index n = 0; n < shape.N; ++n)
    for (Eigen::Index j = 0; j < shape.M; ++j)
      rows.row(n).segment(j * shape.L, shape.L) = page.col(n * shape.M + j).transpose();
  return rows;
}

Cell cell_of(Eigen::Index t, Eigen::Index n, const PageShape& shape, Eigen::Index origin) {
  if (n < 1 || n > shape.N) throw IndexError("series index " + std::to_string(n) + " out of range");
  const auto local = t - origin;
  if (local < 1 || local > shape.T_eff)
    throw IndexError("t=" + std::to_string(t) + " lies outside the retained window [" +
                     std::to_string(origin + 1) + ", " + std::to_string(origin + shape.T_eff) +
                     "]");
  return {(local - 1) % shape.L + 1, (n - 1) * shape.M + (local + shape.L - 1) / shape.L};
}

TimePoint time_of(Cell cell, const PageShape& shape, Eigen::Index origin) {
  if (cell.row < 1 || cell.row > shape.L || cell.col < 1 || cell.col > shape.columns())
    throw IndexError("cell (" + std::to_string(cell.row) + ", " + std::to_string(cell.col) +
                     ") outside the stacked Page matrix");
  const auto n = (cell.col - 1) / shape.M + 1;
  const auto j = (cell.col - 1) % shape.M;
  return {origin + j * shape.L + cell.row, n};
}

Eigen::Index default_L(Eigen::Index N, Eigen::Index T, double shape_ratio) {
  if (N < 1 || T < 1) throw ShapeError("default_L needs N >= 1 and T >= 1");
  if (!(shape_ratio > 0.0)) throw ShapeError("shape ratio must be positive");
  const double nt = static_cast<double>(N) * static_cast<double>(T);
  auto L = static_cast<Eigen::Index>(std::floor(std::sqrt(nt / shape_ratio)));
  // Guard against sqrt rounding just below an exact square.
  while (L > 1 && static_cast<double>(L * L) * shape_ratio > nt) --L;
  while (static_cast<double>((L + 1) * (L + 1)) * shape_ratio <= nt) ++L;
  return std::clamp<Eigen::Index>(L, 1, T);
}

}  // namespace samossa
