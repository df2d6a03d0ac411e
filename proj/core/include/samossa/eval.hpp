#pragma once

#include "samossa/model.hpp"
#include "samossa/panel.hpp"
#include "samossa/synth.hpp"

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace samossa {

/// 1 - SSE / SST, SST taken about the mean of `actual`.
double r_squared(std::span<const double> pred, std::span<const double> actual);

struct MetricReport {
  std::vector<double> r2;
  double mean_r2 = 0.0;
  /// Rolling one-step forecasts (N x H) and the realized values.
  Eigen::MatrixXd predictions;
  Eigen::MatrixXd actual;
  /// Mean squared distance to the conditional mean; only with a known generator.
  std::optional<double> for_err;
  /// Mean squared error against the realized values.
  double mse = 0.0;
  double runtime_seconds = 0.0;
  SamossaConfig config;
};

/// Forecast every series one step ahead, then reveal the realized value,
/// for each column of `test`. `test` must start right after the model's last
/// observation. The model passed in is advanced through the window.
MetricReport rolling_forecast(SamossaModel& model, const TimePanel& test,
                              const std::optional<Eigen::MatrixXd>& conditional_mean = std::nullopt);

/// As above on a copy; the caller's model is untouched.
MetricReport rolling_eval(const SamossaModel& model, const TimePanel& test,
                          const std::optional<Eigen::MatrixXd>& conditional_mean = std::nullopt);

struct GridSpec {
  std::vector<RankRule> ranks;
  std::vector<double> shape_ratios;
  std::vector<Eigen::Index> orders;
  /// Explicit segment length; 0 derives L from each shape ratio.
  Eigen::Index L = 0;

  /// Rank rules {universal, energy:0.9, fixed:5}, ratios {1, 3, 5}, p in {0..3}.
  static GridSpec standard();
  std::size_t size() const { return ranks.size() * shape_ratios.size() * orders.size(); }
};

struct GridPoint {
  SamossaConfig config;
  double score = 0.0;
  Eigen::Index k_hat = 0;
  bool ok = false;
  std::string error;
};

struct GridResult {
  SamossaConfig best;
  std::size_t best_index = 0;
  /// One entry per grid point, in (rank, ratio, order) lattice order.
  std::vector<GridPoint> points;
};

/// Fits each configuration once on `train`, scores it by mean validation R²
/// under rolling one-step evaluation and returns the best. Ties go to the
/// smaller k_hat, then smaller p, then smaller shape ratio, then grid order.
GridResult grid_search(const TimePanel& train, const TimePanel& valid, const GridSpec& grid);

/// Picks the order among `orders` by validation R² with the other settings
/// fixed, then refits on train + valid.
SamossaModel fit_with_order_search(const TimePanel& train, const TimePanel& valid,
                                   SamossaConfig config, const std::vector<Eigen::Index>& orders);

// ---------------------------------------------------------------------------
// Experiment drivers

struct EstimationRow {
  double lambda_star = 0.0;
  double sqrt_nt = 0.0;
  Eigen::Index N = 0;
  Eigen::Index T = 0;
  std::uint64_t seed = 0;
  double est_err = 0.0;
  double alpha_err = 0.0;
};

struct EstimationSummary {
  double lambda_star = 0.0;
  double sqrt_nt = 0.0;
  double median_est_err = 0.0;
  double median_alpha_err = 0.0;
  double mean_est_err = 0.0;
  double mean_alpha_err = 0.0;
};

struct SlopeFit {
  double lambda_star = 0.0;
  /// d log(median EstErr) / d log(NT)
  double est_err_slope = 0.0;
  /// d log(median |alpha_hat - alpha|^2) / d log(NT)
  double alpha_sq_err_slope = 0.0;
};

struct EstimationOptions {
  std::vector<double> lambda_stars = {0.3, 0.6, 0.95};
  std::vector<double> sqrt_nt = {17.32, 77.46, 424.26, 1732.05};
  Eigen::Index N = 10;
  std::uint64_t seeds = 10;
  std::uint64_t first_seed = 1;
  /// Retained rank; the generator's stacked Page rank is 2R = 6.
  Eigen::Index k_hat = 6;
  Eigen::Index ar_order = 2;
  double noise_var = kEstimationNoiseVar;
};

struct EstimationReport {
  std::vector<EstimationRow> rows;
  std::vector<EstimationSummary> summary;
  std::vector<SlopeFit> slopes;
};

/// Estimation-error sweep: EstErr(N, T, 1) and |alpha_hat_1 - alpha_1| over a
/// grid of sqrt(NT) values (T = round(sqrt_nt^2 / N)) and seeds.
EstimationReport estimation_experiment(const EstimationOptions& options);

std::string rows_to_csv(const EstimationReport& report);
std::string summary_to_csv(const EstimationReport& report);

/// Outcome of one tolerance check on an experiment report.
struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Median EstErr reference points of the estimation sweep at lambda* = 0.3,
/// keyed by sqrt(NT).
inline constexpr std::array<std::pair<double, double>, 4> kEstimationReference = {
    {{17.32, 3.6e-2}, {77.46, 1.04e-2}, {424.26, 1.4e-3}, {1732.05, 3.4e-4}}};

/// Band checks on an estimation sweep: EstErr decays for every lambda*; at
/// lambda* = 0.3 the medians sit within x5 of the reference points, the
/// log-log slope lies in [-0.75, -0.25] and the median alpha error at the
/// largest sqrt(NT) is at most 5e-2; at lambda* = 0.95 and sqrt(NT) ~ 1732
/// the median EstErr lies in [1e-3, 5e-2]. Checks whose inputs are absent
/// from the report are skipped.
std::vector<Check> check_estimation(const EstimationReport& report);

/// Median |alpha_hat - alpha|^2 of fit_ar on noise-only AR panels
/// (pure_ar preset, series 0) for each length in `lengths`.
std::vector<double> clean_ar_errors(double lambda_star, std::span<const Eigen::Index> lengths,
                                    std::uint64_t seeds, std::uint64_t first_seed = 1);

/// Least-squares slope of log(y) against log(x).
double log_log_slope(std::span<const double> x, std::span<const double> y);

double median(std::vector<double> values);

struct ForecastComparison {
  std::uint64_t seed = 0;
  double samossa_r2 = 0.0;
  double mssa_r2 = 0.0;
  SamossaConfig samossa_config;
  SamossaConfig mssa_config;
};

struct ForecastOptions {
  Eigen::Index N = 25;
  Eigen::Index train = 10000;
  Eigen::Index valid = 25;
  Eigen::Index test = 25;
  GridSpec grid = GridSpec::standard();
};

/// Synthetic forecasting benchmark: grid search on train/valid for the full
/// pipeline and for the p = 0 ablation, refit both on train + valid, and
/// report mean test R² under rolling one-step evaluation.
ForecastComparison forecast_experiment(std::uint64_t seed, const ForecastOptions& options = {});

/// ||Z_x||_2 / (sigma_x sqrt(NT / L)) for a pure AR panel with L = default_L.
double operator_norm_ratio(double lambda_star, Eigen::Index N, Eigen::Index T, std::uint64_t seed);

}  // namespace samossa
