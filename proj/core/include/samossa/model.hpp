#pragma once

#include "samossa/ar.hpp"
#include "samossa/linear_forecaster.hpp"
#include "samossa/lowrank.hpp"
#include "samossa/panel.hpp"
#include "samossa/ssa_estimator.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <string>
#include <vector>

namespace samossa {

struct SamossaConfig {
  /// Page segment length; 0 selects default_L(N, T, shape_ratio).
  Eigen::Index L = 0;
  double shape_ratio = 1.0;
  RankRule rank = RankRule::energy(0.9);
  /// AR order per series; a single entry applies to every series. Order 0
  /// disables the residual model for that series.
  std::vector<Eigen::Index> p = {1};

  Eigen::Index resolve_L(Eigen::Index N, Eigen::Index T) const;
  Eigen::Index order_for(Eigen::Index n) const;
  bool operator==(const SamossaConfig&) const = default;
};

/// Deterministic stage: stage-one decomposition and the forecasting
/// recurrence. Independent of the AR orders, so it can be shared while
/// searching over p.
struct DeterministicFit {
  Decomposition decomposition;
  BetaModel beta;
};

DeterministicFit fit_deterministic(const TimePanel& panel, Eigen::Index L, const RankRule& rule);

/// One-step forecast for series n at time t. Passed back to `observe`.
struct StepForecast {
  Eigen::Index n = 0;
  long t = 0;
  double y_hat = 0.0;
  double f_hat = 0.0;
  double x_hat = 0.0;
};

class SamossaModel {
 public:
  SamossaModel() = default;

  bool fitted() const { return fitted_; }
  const SamossaConfig& config() const { return config_; }
  const BetaModel& beta_model() const { return beta_; }
  const std::vector<ArModel>& ar_models() const { return ar_; }
  const std::vector<std::string>& series_names() const { return names_; }
  Eigen::Index num_series() const { return static_cast<Eigen::Index>(names_.size()); }
  Eigen::Index L() const { return beta_.L; }
  Eigen::Index k_hat() const { return beta_.k_hat; }

  /// Absolute time of the last observation absorbed for series n.
  long last_time(Eigen::Index n) const;
  /// Most recent first.
  const std::vector<double>& observation_lags(Eigen::Index n) const;
  const std::vector<double>& residual_lags(Eigen::Index n) const;

  /// Forecast for the step after `last_time(n)`. Does not change the model.
  StepForecast forecast_step(Eigen::Index n) const;

  /// Absorbs the realized value for the step `forecast` was issued for.
  /// Throws StateError if that step is not the next one for the series.
  void observe(const StepForecast& forecast, double y);

  /// h-step path that feeds forecasts back as if they were observed.
  std::vector<double> forecast_recursive(Eigen::Index n, Eigen::Index h) const;

  void save(const std::filesystem::path& path) const;
  static SamossaModel load(const std::filesystem::path& path);
  std::string to_json() const;
  static SamossaModel from_json(const std::string& text);

  friend SamossaModel assemble(const TimePanel& panel, const DeterministicFit& stage,
                               const SamossaConfig& config);

 private:
  void check_series(Eigen::Index n) const;

  bool fitted_ = false;
  SamossaConfig config_;
  BetaModel beta_;
  std::vector<ArModel> ar_;
  std::vector<std::string> names_;
  std::vector<long> t_last_;
  std::vector<std::vector<double>> obs_lags_;
  std::vector<std::vector<double>> resid_lags_;
};

/// Fits per-series AR models on the stage-one residuals and seeds the
/// forecasting buffers from the end of `panel`.
SamossaModel assemble(const TimePanel& panel, const DeterministicFit& stage,
                      const SamossaConfig& config);

/// decompose -> fit_beta -> fit_ar for every series.
SamossaModel fit(const TimePanel& panel, const SamossaConfig& config);

/// The mSSA baseline: the same pipeline with every AR order forced to 0.
SamossaModel fit_mssa(const TimePanel& panel, SamossaConfig config);

inline constexpr int kModelFormatVersion = 1;

}  // namespace samossa
