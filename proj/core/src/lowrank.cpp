#include "samossa/lowrank.hpp"

#include "samossa/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <vector>

namespace samossa {

SvdResult svd(const Eigen::MatrixXd& matrix, SvdVectors vectors) {
  unsigned options = 0;
  if (vectors != SvdVectors::None) options |= Eigen::ComputeThinU;
  if (vectors == SvdVectors::Both) options |= Eigen::ComputeThinV;
  Eigen::BDCSVD<Eigen::MatrixXd> solver(matrix, options);
  SvdResult out;
  out.singular_values = solver.singularValues();
  if (vectors != SvdVectors::None) out.left_vectors = solver.matrixU();
  if (vectors == SvdVectors::Both) out.right_vectors = solver.matrixV();
  return out;
}

RankRule RankRule::fixed(Eigen::Index k) {
  if (k < 1) throw RankError("fixed rank must be >= 1");
  return RankRule{Fixed{k}};
}

RankRule RankRule::energy(double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw RankError("energy fraction must lie in (0, 1]");
  return RankRule{Energy{fraction}};
}

RankRule RankRule::universal() { return RankRule{Universal{}}; }

RankRule RankRule::parse(const std::string& text) {
  if (text == "universal") return universal();
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string tail = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "fixed" && !tail.empty()) {
    long k = 0;
    const auto [p, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), k);
    if (ec == std::errc() && p == tail.data() + tail.size()) return fixed(k);
  } else if (head == "energy" && !tail.empty()) {
    double f = 0.0;
    const auto [p, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), f);
    if (ec == std::errc() && p == tail.data() + tail.size()) return energy(f);
  }
  throw RankError("cannot parse rank rule '" + text + "' (expected fixed:K, energy:F or universal)");
}

std::string RankRule::to_string() const {
  struct Visitor {
    std::string operator()(const Fixed& f) const { return "fixed:" + std::to_string(f.k); }
    std::string operator()(const Energy& e) const {
      char buf[32];
      const auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), e.fraction);
      return "energy:" + std::string(buf, p);
    }
    std::string operator()(const Universal&) const { return "universal"; }
  };
  return std::visit(Visitor{}, variant);
}

double universal_threshold_coefficient(double beta) {
  return 0.56 * beta * beta * beta - 0.95 * beta * beta + 1.82 * beta + 1.43;
}

Eigen::Index select_rank(const Eigen::VectorXd& s, const RankRule& rule, Eigen::Index rows,
                         Eigen::Index cols) {
  if (s.size() == 0 || !(s(0) > 0.0)) throw RankError("spectrum has no positive singular value");

  const double eps = std::numeric_limits<double>::epsilon();
  const double positive_floor = static_cast<double>(std::max(rows, cols)) * eps * s(0);
  Eigen::Index positive = 0;
  while (positive < s.size() && s(positive) > positive_floor) ++positive;

  Eigen::Index k = 1;
  if (const auto* f = std::get_if<RankRule::Fixed>(&rule.variant)) {
    k = f->k;
  } else if (const auto* e = std::get_if<RankRule::Energy>(&rule.variant)) {
    const double total = s.squaredNorm();
    const double target = e->fraction * total * (1.0 - 1e-14);
    double acc = 0.0;
    k = 0;
    while (k < s.size() && acc < target) acc += s(k) * s(k), ++k;
  } else {
    const auto lo = std::min(rows, cols);
    const auto hi = std::max(rows, cols);
    const double beta = static_cast<double>(lo) / static_cast<double>(hi);
    std::vector<double> values(s.data(), s.data() + s.size());
    std::sort(values.begin(), values.end());
    const auto m = values.size();
    const double median = m % 2 ? values[m / 2] : 0.5 * (values[m / 2 - 1] + values[m / 2]);
    const double tau = universal_threshold_coefficient(beta) * median;
    k = 0;
    while (k < s.size() && s(k) > tau) ++k;
  }

  k = std::clamp<Eigen::Index>(k, 1, positive);
  // Never split a group of tied singular values.
  const double tie = 1e-12 * s(0);
  while (k < positive && s(k - 1) - s(k) <= tie) ++k;
  return k;
}

Eigen::MatrixXd hsvt(const Eigen::MatrixXd& matrix, const SvdResult& decomposition,
                     Eigen::Index k) {
  if (k < 1 || k > std::min(matrix.rows(), matrix.cols()))
    throw RankError("HSVT rank " + std::to_string(k) + " outside [1, " +
                    std::to_string(std::min(matrix.rows(), matrix.cols())) + "]");
  if (decomposition.left_vectors.cols() < k)
    throw RankError("decomposition does not carry enough left singular vectors");
  const auto Uk = decomposition.left_vectors.leftCols(k);
  return Uk * (Uk.transpose() * matrix);
}

Eigen::MatrixXd hsvt(const Eigen::MatrixXd& matrix, Eigen::Index k) {
  if (k < 1 || k > std::min(matrix.rows(), matrix.cols()))
    throw RankError("HSVT rank " + std::to_string(k) + " outside [1, " +
                    std::to_string(std::min(matrix.rows(), matrix.cols())) + "]");
  return hsvt(matrix, svd(matrix, SvdVectors::Left), k);
}

}  // namespace samossa
