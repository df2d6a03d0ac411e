#pragma once

#include "samossa/panel.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace samossa {

enum class GeneratorKind { Harmonics, HarmonicsTrend, PureAr };

/// Second root of an AR(2) built from lambda_star: +lambda_star / 2 (SameSign)
/// or -lambda_star / 2 (Alternating).
enum class RootPlacement { SameSign, Alternating };

std::string to_string(RootPlacement placement);
RootPlacement parse_root_placement(const std::string& text);

std::string to_string(GeneratorKind kind);
GeneratorKind parse_generator_kind(const std::string& text);

/// y_n(t) = f_n(t) + x_n(t), t = 1..T, where f_n mixes R fundamentals
/// g_r(t) = sin(omega_r t + phi_r) + m_r t with standard-normal weights and
/// x_n is a stationary AR process started from its stationary regime.
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::Harmonics;
  Eigen::Index N = 10;
  Eigen::Index T = 1000;
  Eigen::Index R = 3;
  double omega_min = 2.0 * std::numbers::pi / 100.0;
  double omega_max = 2.0 * std::numbers::pi / 50.0;
  double phase_min = 0.0;
  double phase_max = 2.0 * std::numbers::pi;
  /// Trend slopes; used by HarmonicsTrend only.
  double slope_min = 0.0;
  double slope_max = 0.0;
  /// AR order used with `lambda_star` when `alpha` is empty.
  Eigen::Index ar_order = 2;
  double lambda_star = 0.3;
  RootPlacement placement = RootPlacement::SameSign;
  /// Explicit AR coefficients; overrides ar_order / lambda_star.
  std::vector<double> alpha;
  /// Innovation variance sigma^2. Zero yields x = 0.
  double noise_var = 0.2;
  std::uint64_t seed = 1;

  /// Harmonic mixture with AR(2) noise, roots (lambda_star, -lambda_star / 2),
  /// sigma^2 = kEstimationNoiseVar.
  static GeneratorSpec estimation(double lambda_star, Eigen::Index N, Eigen::Index T,
                                  std::uint64_t seed);
  /// Harmonics plus linear trends with AR(1) noise, alpha = -0.5, sigma^2 = 1.
  static GeneratorSpec forecasting(Eigen::Index N, Eigen::Index T, std::uint64_t seed);
  static GeneratorSpec pure_ar(double lambda_star, Eigen::Index N, Eigen::Index T,
                               std::uint64_t seed);

  /// Resolved AR coefficients.
  Eigen::VectorXd ar_coefficients() const;
  void validate() const;
};

/// Innovation variance of the estimation preset (standard deviation 0.2).
inline constexpr double kEstimationNoiseVar = 0.04;

struct SyntheticPanel {
  TimePanel y;
  TimePanel f;
  TimePanel x;
  /// True AR coefficients per series.
  std::vector<Eigen::VectorXd> alphas;
  GeneratorSpec spec;
};

SyntheticPanel generate(const GeneratorSpec& spec);

/// AR coefficients whose characteristic roots are (lambda_star) for p = 1 or
/// (lambda_star, +-lambda_star / 2) for p = 2.
Eigen::VectorXd ar_from_lambda_star(Eigen::Index p, double lambda_star,
                                    RootPlacement placement = RootPlacement::SameSign);

/// Burn-in length 10 * ceil(1 / (1 - lambda_star)).
Eigen::Index burn_in_length(double lambda_star);

/// Independent generator for `stream` derived from `seed`. Stream 0 draws the
/// deterministic component; stream n + 1 draws the innovations of series n.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream);

/// E[y_n(t) | past] = f_n(t) + sum_i alpha_i x_n(t - i) for absolute times
/// t in [t_begin, t_begin + H). Needs f and x to cover the lags.
Eigen::MatrixXd conditional_means(const TimePanel& f, const TimePanel& x,
                                  const std::vector<Eigen::VectorXd>& alphas, long t_begin,
                                  Eigen::Index H);

}  // namespace samossa
