#pragma once

#include <Eigen/Core>

#include <string>
#include <variant>

namespace samossa {

struct SvdResult {
  Eigen::VectorXd singular_values;  // non-increasing, non-negative
  Eigen::MatrixXd left_vectors;     // thin U (rows x r)
  Eigen::MatrixXd right_vectors;    // thin V (cols x r)
};

enum class SvdVectors { None, Left, Both };

/// Deterministic divide-and-conquer SVD.
SvdResult svd(const Eigen::MatrixXd& matrix, SvdVectors vectors = SvdVectors::Both);

/// How the number of retained singular values is chosen.
struct RankRule {
  struct Fixed {
    Eigen::Index k = 1;
    bool operator==(const Fixed&) const = default;
  };
  struct Energy {
    double fraction = 0.9;
    bool operator==(const Energy&) const = default;
  };
  struct Universal {
    bool operator==(const Universal&) const = default;
  };

  std::variant<Fixed, Energy, Universal> variant = Fixed{};

  static RankRule fixed(Eigen::Index k);
  static RankRule energy(double fraction);
  static RankRule universal();

  /// Parses `fixed:K`, `energy:F` or `universal`.
  static RankRule parse(const std::string& text);
  std::string to_string() const;

  bool operator==(const RankRule&) const = default;
};

/// Coefficient of the median-based hard threshold for an unknown noise level,
/// as a function of the aspect ratio beta = min(rows, cols) / max(rows, cols).
double universal_threshold_coefficient(double beta);

/// Number of singular values to keep under `rule`. Always at least 1 and at
/// most the number of numerically positive values. Values tied with the last
/// retained one are retained too.
Eigen::Index select_rank(const Eigen::VectorXd& singular_values, const RankRule& rule,
                         Eigen::Index rows, Eigen::Index cols);

/// Best rank-k approximation sum_{l<=k} s_l u_l v_l^T.
Eigen::MatrixXd hsvt(const Eigen::MatrixXd& matrix, Eigen::Index k);

/// Projection onto the leading k left singular vectors: U_k U_k^T A.
/// Equal to `hsvt(a, k)` but needs only the left factor.
Eigen::MatrixXd hsvt(const Eigen::MatrixXd& matrix, const SvdResult& decomposition, Eigen::Index k);

}  // namespace samossa
