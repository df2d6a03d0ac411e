#include "samossa/eval.hpp"

#include "samossa/ar.hpp"
#include "samossa/errors.hpp"
#include "samossa/pagemat.hpp"
#include "samossa/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <numeric>
#include <sstream>

namespace samossa {

double r_squared(std::span<const double> pred, std::span<const double> actual) {
  if (pred.size() != actual.size()) throw MetricError("r_squared: length mismatch");
  if (actual.size() < 2) throw MetricError("r_squared needs at least two points");
  const double mean = std::accumulate(actual.begin(), actual.end(), 0.0) / static_cast<double>(actual.size());
  double sse = 0.0;
  double sst = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    sse += (pred[i] - actual[i]) * (pred[i] - actual[i]);
    sst += (actual[i] - mean) * (actual[i] - mean);
  }
  if (!(sst > 0.0)) throw MetricError("r_squared: actual values have zero variance");
  return 1.0 - sse / sst;
}

MetricReport rolling_forecast(SamossaModel& model, const TimePanel& test,
                              const std::optional<Eigen::MatrixXd>& conditional_mean) {
  const auto start = std::chrono::steady_clock::now();
  if (!model.fitted()) throw StateError("rolling evaluation needs a fitted model");
  const auto N = model.num_series();
  const auto H = test.length();
  if (test.num_series() != N) throw ShapeError("test panel has a different number of series");
  for (Eigen::Index n = 0; n < N; ++n)
    if (model.last_time(n) + 1 != test.t0())
      throw StateError("test window starts at t=" + std::to_string(test.t0()) +
                       " but series " + std::to_string(n) + " expects t=" +
                       std::to_string(model.last_time(n) + 1));
  if (conditional_mean && (conditional_mean->rows() != N || conditional_mean->cols() != H))
    throw ShapeError("conditional mean matrix does not match the test window");

  MetricReport report;
  report.config = model.config();
  report.predictions.resize(N, H);
  report.actual = test.values();
  for (Eigen::Index h = 0; h < H; ++h) {
    for (Eigen::Index n = 0; n < N; ++n) {
      const auto step = model.forecast_step(n);
      report.predictions(n, h) = step.y_hat;
      model.observe(step, test(n, h));
    }
  }

  report.r2.resize(static_cast<std::size_t>(N));
  for (Eigen::Index n = 0; n < N; ++n) {
    const Eigen::VectorXd pred = report.predictions.row(n).transpose();
    const Eigen::VectorXd act = report.actual.row(n).transpose();
    report.r2[static_cast<std::size_t>(n)] =
        r_squared({pred.data(), static_cast<std::size_t>(H)}, {act.data(), static_cast<std::size_t>(H)});
  }
  report.mean_r2 = std::accumulate(report.r2.begin(), report.r2.end(), 0.0) / static_cast<double>(N);
  const double cells = static_cast<double>(N * H);
  report.mse = (report.predictions - report.actual).squaredNorm() / cells;
  if (conditional_mean) report.for_err = (report.predictions - *conditional_mean).squaredNorm() / cells;
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

MetricReport rolling_eval(const SamossaModel& model, const TimePanel& test,
                          const std::optional<Eigen::MatrixXd>& conditional_mean) {
  SamossaModel copy = model;
  return rolling_forecast(copy, test, conditional_mean);
}

GridSpec GridSpec::standard() {
  return {{RankRule::universal(), RankRule::energy(0.9), RankRule::fixed(5)}, {1.0, 3.0, 5.0}, {0, 1, 2, 3}, 0};
}

namespace {

Eigen::Index order_of(const SamossaConfig& c) { return c.p.empty() ? 0 : c.p.front(); }

bool better(const GridPoint& a, const GridPoint& b) {
  if (a.ok != b.ok) return a.ok;
  if (a.score != b.score) return a.score > b.score;
  if (a.k_hat != b.k_hat) return a.k_hat < b.k_hat;
  if (order_of(a.config) != order_of(b.config)) return order_of(a.config) < order_of(b.config);
  return a.config.shape_ratio < b.config.shape_ratio;
}

}  // namespace

GridResult grid_search(const TimePanel& train, const TimePanel& valid, const GridSpec& grid) {
  if (grid.size() == 0) throw SearchError("empty hyper-parameter grid");
  const auto groups = grid.ranks.size() * grid.shape_ratios.size();
  const auto orders = grid.orders.size();

  GridResult result;
  result.points.resize(grid.size());
  parallel_for(groups, [&](std::size_t g) {
    const auto& rank = grid.ranks[g / grid.shape_ratios.size()];
    const double ratio = grid.shape_ratios[g % grid.shape_ratios.size()];
    SamossaConfig base;
    base.rank = rank;
    base.shape_ratio = ratio;
    base.L = grid.L;
    for (std::size_t o = 0; o < orders; ++o) {
      auto& point = result.points[g * orders + o];
      point.config = base;
      point.config.p = {grid.orders[o]};
    }
    try {
      const auto L = base.resolve_L(train.num_series(), train.length());
      const auto stage = fit_deterministic(train, L, rank);
      for (std::size_t o = 0; o < orders; ++o) {
        auto& point = result.points[g * orders + o];
        point.config.L = L;
        point.k_hat = stage.decomposition.k_hat;
        try {
          const auto model = assemble(train, stage, point.config);
          point.score = rolling_eval(model, valid).mean_r2;
          point.ok = std::isfinite(point.score);
          if (!point.ok) point.error = "non-finite validation score";
        } catch (const std::exception& e) {
          point.error = e.what();
        }
      }
    } catch (const std::exception& e) {
      for (std::size_t o = 0; o < orders; ++o) result.points[g * orders + o].error = e.what();
    }
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < result.points.size(); ++i)
    if (better(result.points[i], result.points[best])) best = i;
  if (!result.points[best].ok) {
    std::ostringstream os;
    os << "every grid configuration failed:";
    for (const auto& p : result.points)
      os << " [" << p.config.rank.to_string() << ", ratio " << p.config.shape_ratio << ", p "
         << order_of(p.config) << ": " << p.error << "]";
    throw SearchError(os.str());
  }
  result.best_index = best;
  result.best = result.points[best].config;
  return result;
}

SamossaModel fit_with_order_search(const TimePanel& train, const TimePanel& valid,
                                   SamossaConfig config, const std::vector<Eigen::Index>& orders) {
  GridSpec grid{{config.rank}, {config.shape_ratio}, orders, config.L};
  const auto found = grid_search(train, valid, grid);
  config.p = found.best.p;
  return fit(train.append(valid), config);
}

// ---------------------------------------------------------------------------

double median(std::vector<double> values) {
  if (values.empty()) throw MetricError("median of an empty set");
  std::sort(values.begin(), values.end());
  const auto m = values.size();
  return m % 2 ? values[m / 2] : 0.5 * (values[m / 2 - 1] + values[m / 2]);
}

double log_log_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw MetricError("slope fit needs >= 2 paired points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += std::log(x[i]), my += std::log(y[i]);
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

EstimationReport estimation_experiment(const EstimationOptions& options) {
  struct Job {
    double lambda_star;
    double sqrt_nt;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (double lambda : options.lambda_stars)
    for (double s : options.sqrt_nt)
      for (std::uint64_t k = 0; k < options.seeds; ++k) jobs.push_back({lambda, s, options.first_seed + k});

  EstimationReport report;
  report.rows.resize(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t j) {
    const auto& job = jobs[j];
    const auto T = std::max<Eigen::Index>(
        1, static_cast<Eigen::Index>(std::llround(job.sqrt_nt * job.sqrt_nt / static_cast<double>(options.N))));
    auto spec = GeneratorSpec::estimation(job.lambda_star, options.N, T, job.seed);
    spec.ar_order = options.ar_order;
    spec.noise_var = options.noise_var;
    const auto data = generate(spec);
    const auto L = default_L(options.N, T);
    const auto dec = decompose(data.y, L, RankRule::fixed(options.k_hat));
    const Eigen::VectorXd residual = dec.x_hat.row(0).transpose();
    const auto ar = fit_ar({residual.data(), static_cast<std::size_t>(residual.size())}, options.ar_order);

    auto& row = report.rows[j];
    row.lambda_star = job.lambda_star;
    row.sqrt_nt = job.sqrt_nt;
    row.N = options.N;
    row.T = T;
    row.seed = job.seed;
    row.est_err = est_err(dec, data.f, 0);
    row.alpha_err = (ar.alpha - data.alphas.front()).norm();
  });

  for (double lambda : options.lambda_stars) {
    std::vector<double> nt, est, alpha_sq;
    for (double s : options.sqrt_nt) {
      std::vector<double> e, a;
      double nt_value = 0.0;
      for (const auto& r : report.rows)
        if (r.lambda_star == lambda && r.sqrt_nt == s) {
          e.push_back(r.est_err);
          a.push_back(r.alpha_err);
          nt_value = static_cast<double>(r.N * r.T);
        }
      EstimationSummary sum;
      sum.lambda_star = lambda;
      sum.sqrt_nt = s;
      sum.mean_est_err = std::accumulate(e.begin(), e.end(), 0.0) / static_cast<double>(e.size());
      sum.mean_alpha_err = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(a.size());
      sum.median_est_err = median(e);
      sum.median_alpha_err = median(a);
      report.summary.push_back(sum);
      nt.push_back(nt_value);
      est.push_back(sum.median_est_err);
      alpha_sq.push_back(sum.median_alpha_err * sum.median_alpha_err);
    }
    SlopeFit fit;
    fit.lambda_star = lambda;
    if (nt.size() >= 2) {
      fit.est_err_slope = log_log_slope(nt, est);
      fit.alpha_sq_err_slope = log_log_slope(nt, alpha_sq);
    }
    report.slopes.push_back(fit);
  }
  return report;
}

std::string rows_to_csv(const EstimationReport& report) {
  std::ostringstream os;
  os << "lambda_star,sqrt_nt,N,T,seed,est_err,alpha_err\n";
  for (const auto& r : report.rows)
    os << format_double(r.lambda_star) << ',' << format_double(r.sqrt_nt) << ',' << r.N << ','
       << r.T << ',' << r.seed << ',' << format_double(r.est_err) << ','
       << format_double(r.alpha_err) << '\n';
  return os.str();
}

std::string summary_to_csv(const EstimationReport& report) {
  std::ostringstream os;
  os << "lambda_star,sqrt_nt,median_est_err,median_alpha_err,mean_est_err,mean_alpha_err\n";
  for (const auto& s : report.summary)
    os << format_double(s.lambda_star) << ',' << format_double(s.sqrt_nt) << ','
       << format_double(s.median_est_err) << ',' << format_double(s.median_alpha_err) << ','
       << format_double(s.mean_est_err) << ',' << format_double(s.mean_alpha_err) << '\n';
  return os.str();
}

ForecastComparison forecast_experiment(std::uint64_t seed, const ForecastOptions& options) {
  const auto total = options.train + options.valid + options.test;
  const auto data = generate(GeneratorSpec::forecasting(options.N, total, seed));
  const auto [train, valid, test] =
      split(data.y, {options.train, options.train + options.valid, total});
  const auto train_valid = train.append(valid);

  ForecastComparison out;
  out.seed = seed;

  const auto full = grid_search(train, valid, options.grid);
  out.samossa_config = full.best;
  out.samossa_config.L = 0;
  out.samossa_r2 = rolling_eval(fit(train_valid, out.samossa_config), test).mean_r2;

  auto ablation_grid = options.grid;
  ablation_grid.orders = {0};
  const auto ablation = grid_search(train, valid, ablation_grid);
  out.mssa_config = ablation.best;
  out.mssa_config.L = 0;
  out.mssa_r2 = rolling_eval(fit_mssa(train_valid, out.mssa_config), test).mean_r2;
  return out;
}

double operator_norm_ratio(double lambda_star, Eigen::Index N, Eigen::Index T, std::uint64_t seed) {
  const auto data = generate(GeneratorSpec::pure_ar(lambda_star, N, T, seed));
  const auto L = default_L(N, T);
  const auto page = stack(data.x, L);
  const double op_norm = svd(page.data, SvdVectors::None).singular_values(0);
  ArModel truth;
  truth.alpha = data.alphas.front();
  truth.p = truth.alpha.size();
  const auto diag = diagnostics(truth, std::sqrt(data.spec.noise_var));
  const double columns = static_cast<double>(page.shape.columns());
  return op_norm / (diag.sigma_x * std::sqrt(columns));
}

namespace {

bool near(double a, double b) { return std::abs(a - b) <= 0.01 * std::abs(b); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace

std::vector<Check> check_estimation(const EstimationReport& report) {
  std::vector<Check> out;
  for (const auto& fit : report.slopes) {
    const double ls = fit.lambda_star;
    std::vector<const EstimationSummary*> rows;
    for (const auto& s : report.summary)
      if (s.lambda_star == ls) rows.push_back(&s);
    if (rows.size() < 2) continue;
    const auto lo = *std::min_element(rows.begin(), rows.end(), [](auto* a, auto* b) {
      return a->sqrt_nt < b->sqrt_nt;
    });
    const auto hi = *std::max_element(rows.begin(), rows.end(), [](auto* a, auto* b) {
      return a->sqrt_nt < b->sqrt_nt;
    });
    const std::string tag = "lambda*=" + fmt(ls);
    out.push_back({tag + " EstErr decays", hi->median_est_err < lo->median_est_err,
                   fmt(lo->median_est_err) + " -> " + fmt(hi->median_est_err)});

    if (near(ls, 0.3)) {
      for (const auto& [snt, ref] : kEstimationReference) {
        for (const auto* r : rows) {
          if (!near(r->sqrt_nt, snt)) continue;
          const double v = r->median_est_err;
          out.push_back({tag + " EstErr band at sqrt(NT)=" + fmt(snt),
                         v >= ref / 5.0 && v <= ref * 5.0,
                         "median " + fmt(v) + ", reference " + fmt(ref) + ", band x5"});
        }
      }
      out.push_back({tag + " EstErr slope", fit.est_err_slope >= -0.75 && fit.est_err_slope <= -0.25,
                     "slope " + fmt(fit.est_err_slope) + " in [-0.75, -0.25]"});
      out.push_back({tag + " alpha error at largest sqrt(NT)", hi->median_alpha_err <= 5e-2,
                     "median " + fmt(hi->median_alpha_err) + " <= 0.05 at sqrt(NT)=" +
                         fmt(hi->sqrt_nt)});
    }
    if (near(ls, 0.95)) {
      for (const auto* r : rows) {
        if (!near(r->sqrt_nt, 1732.05)) continue;
        const double v = r->median_est_err;
        out.push_back({tag + " EstErr at sqrt(NT)=1732", v >= 1e-3 && v <= 5e-2,
                       "median " + fmt(v) + " in [0.001, 0.05]"});
      }
    }
  }
  return out;
}

std::vector<double> clean_ar_errors(double lambda_star, std::span<const Eigen::Index> lengths,
                                    std::uint64_t seeds, std::uint64_t first_seed) {
  struct Job {
    std::size_t slot;
    Eigen::Index T;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < lengths.size(); ++i)
    for (std::uint64_t s = 0; s < seeds; ++s) jobs.push_back({i, lengths[i], first_seed + s});
  std::vector<double> err(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t j) {
    const auto data = generate(GeneratorSpec::pure_ar(lambda_star, 1, jobs[j].T, jobs[j].seed));
    const Eigen::VectorXd x = data.x.series(0);
    const auto model = fit_ar({x.data(), static_cast<std::size_t>(x.size())}, data.alphas[0].size());
    err[j] = (model.alpha - data.alphas[0]).squaredNorm();
  });
  std::vector<double> out;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    std::vector<double> slot;
    for (std::size_t j = 0; j < jobs.size(); ++j)
      if (jobs[j].slot == i) slot.push_back(err[j]);
    out.push_back(median(std::move(slot)));
  }
  return out;
}

}  // namespace samossa
