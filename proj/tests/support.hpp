#pragma once

#include "samossa/panel.hpp"

#include <Eigen/Core>
#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

namespace test {

inline const nlohmann::json& oracles() {
  static const nlohmann::json data = [] {
    std::ifstream in(SAMOSSA_ORACLES);
    REQUIRE_MESSAGE(in.good(), "missing oracle file " SAMOSSA_ORACLES);
    return nlohmann::json::parse(in);
  }();
  return data;
}

inline Eigen::MatrixXd matrix(const nlohmann::json& rows) {
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = static_cast<Eigen::Index>(rows.at(0).size());
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

inline Eigen::VectorXd vector(const nlohmann::json& values) {
  const auto v = values.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  REQUIRE(a.rows() == b.rows());
  REQUIRE(a.cols() == b.cols());
  return (a - b).cwiseAbs().maxCoeff();
}

inline double relative_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}

}  // namespace test
