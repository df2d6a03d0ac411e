#include "samossa/model.hpp"

#include "samossa/errors.hpp"
#include "samossa/pagemat.hpp"
#include "samossa/parallel.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace samossa {

namespace {

using nlohmann::json;

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void push_front(std::vector<double>& buffer, double value) {
  if (buffer.empty()) return;
  buffer.pop_back();
  buffer.insert(buffer.begin(), value);
}

}  // namespace

Eigen::Index SamossaConfig::resolve_L(Eigen::Index N, Eigen::Index T) const {
  return L > 0 ? L : default_L(N, T, shape_ratio);
}

Eigen::Index SamossaConfig::order_for(Eigen::Index n) const {
  if (p.empty()) return 0;
  if (p.size() == 1) return p.front();
  return p.at(static_cast<std::size_t>(n));
}

DeterministicFit fit_deterministic(const TimePanel& panel, Eigen::Index L, const RankRule& rule) {
  if (L < 2) throw FitError("forecasting needs L >= 2, got L=" + std::to_string(L));
  const auto page = stack(panel, L);
  DeterministicFit out;
  out.decomposition = decompose(panel, page, svd(page.data, SvdVectors::Left), rule);
  out.beta = fit_beta(page, out.decomposition.k_hat);
  return out;
}

SamossaModel assemble(const TimePanel& panel, const DeterministicFit& stage,
                      const SamossaConfig& config) {
  const auto N = panel.num_series();
  if (stage.decomposition.num_series() != N)
    throw ShapeError("deterministic fit does not match the panel");
  if (config.p.size() > 1 && static_cast<Eigen::Index>(config.p.size()) != N)
    throw ShapeError("per-series AR orders must list one order per series");

  SamossaModel model;
  model.config_ = config;
  model.config_.L = stage.beta.L;
  model.beta_ = stage.beta;
  model.names_ = panel.names();
  model.ar_.resize(static_cast<std::size_t>(N));

  const auto& x_hat = stage.decomposition.x_hat;
  parallel_for(static_cast<std::size_t>(N), [&](std::size_t n) {
    const Eigen::VectorXd row = x_hat.row(static_cast<Eigen::Index>(n)).transpose();
    model.ar_[n] = fit_ar(std::span<const double>(row.data(), static_cast<std::size_t>(row.size())),
                          config.order_for(static_cast<Eigen::Index>(n)));
  });

  const auto lags = model.beta_.L - 1;
  for (Eigen::Index n = 0; n < N; ++n) {
    std::vector<double> obs(static_cast<std::size_t>(lags));
    for (Eigen::Index i = 0; i < lags; ++i) obs[static_cast<std::size_t>(i)] = panel(n, panel.length() - 1 - i);
    const auto p = model.ar_[static_cast<std::size_t>(n)].p;
    std::vector<double> resid(static_cast<std::size_t>(p));
    for (Eigen::Index i = 0; i < p; ++i)
      resid[static_cast<std::size_t>(i)] = x_hat(n, x_hat.cols() - 1 - i);
    model.obs_lags_.push_back(std::move(obs));
    model.resid_lags_.push_back(std::move(resid));
    model.t_last_.push_back(panel.t_end());
  }
  model.fitted_ = true;
  return model;
}

SamossaModel fit(const TimePanel& panel, const SamossaConfig& config) {
  const auto L = config.resolve_L(panel.num_series(), panel.length());
  return assemble(panel, fit_deterministic(panel, L, config.rank), config);
}

SamossaModel fit_mssa(const TimePanel& panel, SamossaConfig config) {
  config.p = {0};
  return fit(panel, config);
}

void SamossaModel::check_series(Eigen::Index n) const {
  if (!fitted_) throw StateError("model has not been fitted or loaded");
  if (n < 0 || n >= num_series())
    throw IndexError("series index " + std::to_string(n) + " out of range");
}

long SamossaModel::last_time(Eigen::Index n) const {
  check_series(n);
  return t_last_[static_cast<std::size_t>(n)];
}

const std::vector<double>& SamossaModel::observation_lags(Eigen::Index n) const {
  check_series(n);
  return obs_lags_[static_cast<std::size_t>(n)];
}

const std::vector<double>& SamossaModel::residual_lags(Eigen::Index n) const {
  check_series(n);
  return resid_lags_[static_cast<std::size_t>(n)];
}

StepForecast SamossaModel::forecast_step(Eigen::Index n) const {
  check_series(n);
  const auto i = static_cast<std::size_t>(n);
  StepForecast out;
  out.n = n;
  out.t = t_last_[i] + 1;
  out.f_hat = forecast_f(beta_, obs_lags_[i]);
  out.x_hat = forecast_ar(ar_[i], resid_lags_[i]);
  out.y_hat = out.f_hat + out.x_hat;
  return out;
}

void SamossaModel::observe(const StepForecast& forecast, double y) {
  check_series(forecast.n);
  const auto i = static_cast<std::size_t>(forecast.n);
  if (forecast.t != t_last_[i] + 1)
    throw StateError("observation for t=" + std::to_string(forecast.t) + " on series " +
                     std::to_string(forecast.n) + " is out of order; next expected t=" +
                     std::to_string(t_last_[i] + 1) + " (forecast before observing)");
  if (!std::isfinite(y)) throw IngestError("observed value is not finite");
  push_front(obs_lags_[i], y);
  push_front(resid_lags_[i], y - forecast.f_hat);
  ++t_last_[i];
}

std::vector<double> SamossaModel::forecast_recursive(Eigen::Index n, Eigen::Index h) const {
  check_series(n);
  SamossaModel scratch;
  scratch.fitted_ = true;
  scratch.beta_ = beta_;
  scratch.ar_ = {ar_[static_cast<std::size_t>(n)]};
  scratch.names_ = {names_[static_cast<std::size_t>(n)]};
  scratch.t_last_ = {t_last_[static_cast<std::size_t>(n)]};
  scratch.obs_lags_ = {obs_lags_[static_cast<std::size_t>(n)]};
  scratch.resid_lags_ = {resid_lags_[static_cast<std::size_t>(n)]};
  std::vector<double> path;
  for (Eigen::Index step = 0; step < h; ++step) {
    const auto f = scratch.forecast_step(0);
    path.push_back(f.y_hat);
    scratch.observe(f, f.y_hat);
  }
  return path;
}

std::string SamossaModel::to_json() const {
  if (!fitted_) throw StateError("cannot serialise an unfitted model");
  json ar = json::array();
  for (const auto& m : ar_)
    ar.push_back({{"alpha", to_vector(m.alpha)}, {"p", m.p}, {"noise_var", m.noise_var},
                  {"rank_deficient", m.rank_deficient}});
  json doc = {
      {"version", kModelFormatVersion},
      {"config",
       {{"L", beta_.L},
        {"k_hat", beta_.k_hat},
        {"shape_ratio", config_.shape_ratio},
        {"rank", config_.rank.to_string()},
        {"p", config_.p}}},
      {"beta", to_vector(beta_.beta)},
      {"beta_residual_rms", beta_.residual_rms},
      {"ar", ar},
      {"state",
       {{"series", names_},
        {"t_last", t_last_},
        {"observation_lags", obs_lags_},
        {"residual_lags", resid_lags_}}},
  };
  return doc.dump(2) + "\n";
}

SamossaModel SamossaModel::from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed model file: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("version")) throw ParseError("model file has no version field");
  const auto& version = doc["version"];
  const bool known = (version.is_number_integer() && version.get<int>() == kModelFormatVersion) ||
                     (version.is_string() && version.get<std::string>() == std::to_string(kModelFormatVersion));
  if (!known)
    throw PersistError("unsupported model format version " + version.dump() + " (expected " +
                       std::to_string(kModelFormatVersion) + ")");

  SamossaModel m;
  try {
    const auto& cfg = doc.at("config");
    m.config_.L = cfg.at("L").get<Eigen::Index>();
    m.config_.shape_ratio = cfg.at("shape_ratio").get<double>();
    m.config_.rank = RankRule::parse(cfg.at("rank").get<std::string>());
    m.config_.p = cfg.at("p").get<std::vector<Eigen::Index>>();
    m.beta_.L = m.config_.L;
    m.beta_.k_hat = cfg.at("k_hat").get<Eigen::Index>();
    m.beta_.beta = to_eigen(doc.at("beta").get<std::vector<double>>());
    m.beta_.residual_rms = doc.at("beta_residual_rms").get<double>();
    for (const auto& a : doc.at("ar")) {
      ArModel ar;
      ar.alpha = to_eigen(a.at("alpha").get<std::vector<double>>());
      ar.p = a.at("p").get<Eigen::Index>();
      ar.noise_var = a.at("noise_var").get<double>();
      ar.rank_deficient = a.value("rank_deficient", false);
      m.ar_.push_back(std::move(ar));
    }
    const auto& state = doc.at("state");
    m.names_ = state.at("series").get<std::vector<std::string>>();
    m.t_last_ = state.at("t_last").get<std::vector<long>>();
    m.obs_lags_ = state.at("observation_lags").get<std::vector<std::vector<double>>>();
    m.resid_lags_ = state.at("residual_lags").get<std::vector<std::vector<double>>>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed model file: ") + e.what());
  } catch (const RankError& e) {
    throw ParseError(std::string("malformed model file: ") + e.what());
  }

  const auto N = m.names_.size();
  if (m.beta_.L < 2 || m.beta_.beta.size() != m.beta_.L - 1)
    throw ParseError("malformed model file: beta length does not match L-1");
  if (m.ar_.size() != N || m.t_last_.size() != N || m.obs_lags_.size() != N ||
      m.resid_lags_.size() != N)
    throw ParseError("malformed model file: per-series arrays disagree in length");
  for (std::size_t n = 0; n < N; ++n) {
    if (m.ar_[n].alpha.size() != m.ar_[n].p ||
        static_cast<Eigen::Index>(m.resid_lags_[n].size()) != m.ar_[n].p ||
        static_cast<Eigen::Index>(m.obs_lags_[n].size()) != m.beta_.L - 1)
      throw ParseError("malformed model file: lag buffers do not match L and p for series " +
                       std::to_string(n));
  }
  m.fitted_ = true;
  return m;
}

void SamossaModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PersistError("cannot write '" + path.string() + "'");
  out << to_json();
}

SamossaModel SamossaModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PersistError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

}  // namespace samossa
