#pragma once

#include "samossa/panel.hpp"

#include <Eigen/Core>

#include <span>

namespace samossa {

/// Geometry of a stacked Page matrix: L rows, M columns per series and
/// N column blocks. Each series contributes its trailing `T_eff = L * M`
/// observations.
struct PageShape {
  Eigen::Index L = 0;
  Eigen::Index M = 0;
  Eigen::Index N = 0;
  Eigen::Index T_eff = 0;

  Eigen::Index columns() const { return N * M; }
  bool operator==(const PageShape&) const = default;
};

/// 1-based (row, col) of a stacked Page matrix cell.
struct Cell {
  Eigen::Index row = 0;
  Eigen::Index col = 0;
  bool operator==(const Cell&) const = default;
};

/// 1-based (t, n) where t counts from the first observation of the series
/// (including any dropped prefix).
struct TimePoint {
  Eigen::Index t = 0;
  Eigen::Index n = 0;
  bool operator==(const TimePoint&) const = default;
};

/// Column-wise concatenation of per-series Page matrices. Column block n
/// (0-based) spans columns [n*M, (n+1)*M); within a block, column j holds
/// the non-overlapping segment y(origin + j*L + 1 .. origin + (j+1)*L).
/// `origin` is the number of leading observations dropped so that L divides
/// the retained window.
struct StackedPage {
  PageShape shape;
  Eigen::Index origin = 0;
  Eigen::MatrixXd data;
};

PageShape page_shape(Eigen::Index N, Eigen::Index T, Eigen::Index L);

StackedPage page_matrix(std::span<const double> series, Eigen::Index L);
StackedPage stack(const TimePanel& panel, Eigen::Index L);
StackedPage stack(const Eigen::MatrixXd& rows, Eigen::Index L);

/// Inverse of a stacked Page matrix: N x T_eff matrix of the retained window.
Eigen::MatrixXd unstack(const Eigen::MatrixXd& page, const PageShape& shape);

Cell cell_of(Eigen::Index t, Eigen::Index n, const PageShape& shape, Eigen::Index origin);
TimePoint time_of(Cell cell, const PageShape& shape, Eigen::Index origin);

/// min(floor(sqrt(N*T / shape_ratio)), T), at least 1. `shape_ratio` is the
/// target columns-to-rows ratio of the stacked matrix (1 gives a square one).
Eigen::Index default_L(Eigen::Index N, Eigen::Index T, double shape_ratio = 1.0);

}  // namespace samossa
