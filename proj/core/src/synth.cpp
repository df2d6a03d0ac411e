#include "samossa/synth.hpp"

#include "samossa/ar.hpp"
#include "samossa/errors.hpp"

#include <cmath>

namespace samossa {

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::Harmonics: return "harmonics";
    case GeneratorKind::HarmonicsTrend: return "harmonics_trend";
    case GeneratorKind::PureAr: return "pure_ar";
  }
  return "unknown";
}

GeneratorKind parse_generator_kind(const std::string& text) {
  if (text == "harmonics") return GeneratorKind::Harmonics;
  if (text == "harmonics_trend") return GeneratorKind::HarmonicsTrend;
  if (text == "pure_ar") return GeneratorKind::PureAr;
  throw SpecError("unknown generator kind '" + text + "'");
}

std::string to_string(RootPlacement placement) {
  return placement == RootPlacement::SameSign ? "same_sign" : "alternating";
}

RootPlacement parse_root_placement(const std::string& text) {
  if (text == "same_sign") return RootPlacement::SameSign;
  if (text == "alternating") return RootPlacement::Alternating;
  throw SpecError("unknown root placement '" + text + "'");
}

GeneratorSpec GeneratorSpec::estimation(double lambda_star, Eigen::Index N, Eigen::Index T,
                                        std::uint64_t seed) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::Harmonics;
  spec.N = N;
  spec.T = T;
  spec.R = 3;
  spec.ar_order = 2;
  spec.lambda_star = lambda_star;
  spec.placement = RootPlacement::Alternating;
  spec.noise_var = kEstimationNoiseVar;
  spec.seed = seed;
  return spec;
}

GeneratorSpec GeneratorSpec::forecasting(Eigen::Index N, Eigen::Index T, std::uint64_t seed) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::HarmonicsTrend;
  spec.N = N;
  spec.T = T;
  spec.R = 3;
  spec.omega_min = 2.0 * std::numbers::pi / 100.0;
  spec.omega_max = 2.0 * std::numbers::pi / 10.0;
  spec.slope_min = -5e-4;
  spec.slope_max = 5e-4;
  spec.alpha = {-0.5};
  spec.noise_var = 1.0;
  spec.seed = seed;
  return spec;
}

GeneratorSpec GeneratorSpec::pure_ar(double lambda_star, Eigen::Index N, Eigen::Index T,
                                     std::uint64_t seed) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::PureAr;
  spec.N = N;
  spec.T = T;
  spec.R = 0;
  spec.ar_order = 2;
  spec.lambda_star = lambda_star;
  spec.placement = RootPlacement::Alternating;
  spec.noise_var = kEstimationNoiseVar;
  spec.seed = seed;
  return spec;
}

Eigen::VectorXd GeneratorSpec::ar_coefficients() const {
  if (!alpha.empty())
    return Eigen::Map<const Eigen::VectorXd>(alpha.data(), static_cast<Eigen::Index>(alpha.size()));
  return ar_from_lambda_star(ar_order, lambda_star, placement);
}

void GeneratorSpec::validate() const {
  if (N < 1 || T < 1) throw SpecError("generator needs N >= 1 and T >= 1");
  if (kind != GeneratorKind::PureAr) {
    if (R < 1) throw SpecError("generator needs R >= 1 fundamentals");
    if (!(0.0 < omega_min && omega_min <= omega_max && omega_max < std::numbers::pi))
      throw SpecError("frequency range must lie inside (0, pi)");
    if (phase_min > phase_max) throw SpecError("empty phase range");
    if (slope_min > slope_max) throw SpecError("empty slope range");
  }
  if (!(noise_var >= 0.0) || !std::isfinite(noise_var)) throw SpecError("noise variance must be >= 0");
  const auto a = ar_coefficients();
  if (a.size() > 0) {
    const double radius = std::abs(characteristic_roots(a)(0));
    if (!(radius < 1.0)) throw SpecError("AR coefficients are not stationary");
  }
}

Eigen::VectorXd ar_from_lambda_star(Eigen::Index p, double lambda_star,
                                    RootPlacement placement) {
  if (!(lambda_star > 0.0 && lambda_star < 1.0)) throw SpecError("lambda_star must lie in (0, 1)");
  Eigen::VectorXd alpha(p);
  if (p == 1) {
    alpha << lambda_star;
  } else if (p == 2) {
    // (z - l)(z - r) = z^2 - (l + r) z + l r
    const double r = placement == RootPlacement::SameSign ? 0.5 * lambda_star : -0.5 * lambda_star;
    alpha << lambda_star + r, -lambda_star * r;
  } else {
    throw SpecError("ar_from_lambda_star supports p in {1, 2}, got " + std::to_string(p));
  }
  return alpha;
}

Eigen::Index burn_in_length(double lambda_star) {
  if (!(lambda_star < 1.0)) throw SpecError("burn-in needs lambda_star < 1");
  return 10 * static_cast<Eigen::Index>(std::ceil(1.0 / (1.0 - lambda_star)));
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

SyntheticPanel generate(const GeneratorSpec& spec) {
  spec.validate();
  const auto N = spec.N;
  const auto T = spec.T;

  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(N, T);
  if (spec.kind != GeneratorKind::PureAr) {
    auto rng = make_stream(spec.seed, 0);
    std::uniform_real_distribution<double> omega(spec.omega_min, spec.omega_max);
    std::uniform_real_distribution<double> phase(spec.phase_min, spec.phase_max);
    std::uniform_real_distribution<double> slope(spec.slope_min, spec.slope_max);
    std::normal_distribution<double> weight(0.0, 1.0);

    Eigen::MatrixXd fundamentals(spec.R, T);
    for (Eigen::Index r = 0; r < spec.R; ++r) {
      const double w = omega(rng);
      const double phi = phase(rng);
      const double m = spec.kind == GeneratorKind::HarmonicsTrend ? slope(rng) : 0.0;
      for (Eigen::Index t = 0; t < T; ++t) {
        const double time = static_cast<double>(t + 1);
        fundamentals(r, t) = std::sin(w * time + phi) + m * time;
      }
    }
    Eigen::MatrixXd weights(N, spec.R);
    for (Eigen::Index n = 0; n < N; ++n)
      for (Eigen::Index r = 0; r < spec.R; ++r) weights(n, r) = weight(rng);
    f = weights * fundamentals;
  }

  const Eigen::VectorXd alpha = spec.ar_coefficients();
  const auto p = alpha.size();
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(N, T);
  if (spec.noise_var > 0.0 && p > 0) {
    const double lambda_star = std::abs(characteristic_roots(alpha)(0));
    const auto burn_in = burn_in_length(lambda_star);
    const double sigma = std::sqrt(spec.noise_var);
    for (Eigen::Index n = 0; n < N; ++n) {
      auto rng = make_stream(spec.seed, static_cast<std::uint64_t>(n) + 1);
      std::normal_distribution<double> eta(0.0, sigma);
      Eigen::VectorXd path = Eigen::VectorXd::Zero(burn_in + T);
      for (Eigen::Index t = 0; t < burn_in + T; ++t) {
        double v = eta(rng);
        for (Eigen::Index i = 0; i < p && t - 1 - i >= 0; ++i) v += alpha(i) * path(t - 1 - i);
        path(t) = v;
      }
      x.row(n) = path.tail(T).transpose();
    }
  }

  std::vector<Eigen::VectorXd> alphas(static_cast<std::size_t>(N), alpha);
  TimePanel y_panel(f + x, 1);
  TimePanel f_panel(std::move(f), 1);
  TimePanel x_panel(std::move(x), 1);
  return {std::move(y_panel), std::move(f_panel), std::move(x_panel), std::move(alphas), spec};
}

Eigen::MatrixXd conditional_means(const TimePanel& f, const TimePanel& x,
                                  const std::vector<Eigen::VectorXd>& alphas, long t_begin,
                                  Eigen::Index H) {
  const auto N = f.num_series();
  if (x.num_series() != N || static_cast<Eigen::Index>(alphas.size()) != N)
    throw ShapeError("conditional_means: f, x and alphas disagree on N");
  Eigen::MatrixXd out(N, H);
  for (Eigen::Index n = 0; n < N; ++n) {
    const auto& a = alphas[static_cast<std::size_t>(n)];
    for (Eigen::Index h = 0; h < H; ++h) {
      const long t = t_begin + static_cast<long>(h);
      const long fc = t - f.t0();
      if (fc < 0 || fc >= f.length()) throw ShapeError("truth f does not cover t=" + std::to_string(t));
      double v = f(n, fc);
      for (Eigen::Index i = 0; i < a.size(); ++i) {
        const long xc = t - 1 - static_cast<long>(i) - x.t0();
        if (xc < 0 || xc >= x.length())
          throw ShapeError("truth x does not cover the lags of t=" + std::to_string(t));
        v += a(i) * x(n, xc);
      }
      out(n, h) = v;
    }
  }
  return out;
}

}  // namespace samossa
