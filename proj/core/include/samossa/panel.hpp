#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <string>
#include <tuple>
#include <vector>

namespace samossa {

enum class CsvLayout { Wide, Long };

CsvLayout parse_layout(const std::string& name);

/// N aligned real-valued series of equal length. Row n of `values()` is
/// series n; column j holds time index `t0() + j`. Immutable after
/// construction; every value is finite.
class TimePanel {
 public:
  TimePanel() = default;
  TimePanel(std::vector<std::string> names, Eigen::MatrixXd values, long t0 = 1);
  /// Names default to s1..sN.
  explicit TimePanel(Eigen::MatrixXd values, long t0 = 1);

  Eigen::Index num_series() const { return values_.rows(); }
  Eigen::Index length() const { return values_.cols(); }
  long t0() const { return t0_; }
  /// Absolute time index of the last column.
  long t_end() const { return t0_ + static_cast<long>(values_.cols()) - 1; }

  const std::vector<std::string>& names() const { return names_; }
  const Eigen::MatrixXd& values() const { return values_; }
  Eigen::VectorXd series(Eigen::Index n) const { return values_.row(n).transpose(); }
  double operator()(Eigen::Index n, Eigen::Index col) const { return values_(n, col); }

  bool empty() const { return values_.size() == 0; }

  /// Columns [begin, end) as a new panel with t0 shifted accordingly.
  TimePanel slice(Eigen::Index begin, Eigen::Index end) const;

  /// Series concatenated along time; `next` must start right after `*this`.
  TimePanel append(const TimePanel& next) const;

 private:
  void validate() const;

  std::vector<std::string> names_;
  Eigen::MatrixXd values_;
  long t0_ = 1;
};

/// Split boundaries, 1-based and relative to the panel start:
/// train = [1, train_end], valid = (train_end, valid_end], test = (valid_end, test_end].
struct SplitSpec {
  Eigen::Index train_end = 0;
  Eigen::Index valid_end = 0;
  Eigen::Index test_end = 0;
};

std::tuple<TimePanel, TimePanel, TimePanel> split(const TimePanel& panel, const SplitSpec& spec);

TimePanel load_csv(const std::filesystem::path& path, CsvLayout layout = CsvLayout::Wide);
TimePanel parse_csv(const std::string& text, CsvLayout layout = CsvLayout::Wide);

/// Writes with a header row (wide) or `series,t,value` header (long).
/// Numbers use the shortest representation that round-trips.
void save_csv(const TimePanel& panel, const std::filesystem::path& path,
              CsvLayout layout = CsvLayout::Wide);
std::string to_csv(const TimePanel& panel, CsvLayout layout = CsvLayout::Wide);

/// Shortest round-trip decimal representation of `v`.
std::string format_double(double v);

}  // namespace samossa
