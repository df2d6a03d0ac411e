#include "cli.hpp"

#include "samossa/errors.hpp"
#include "samossa/eval.hpp"
#include "samossa/model.hpp"
#include "samossa/pagemat.hpp"
#include "samossa/parallel.hpp"
#include "samossa/ssa_estimator.hpp"
#include "samossa/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace samossa::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::optional<long> parse_long(const std::string& s) {
  long v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

const CLI::Validator kLength(
    [](std::string& s) -> std::string {
      if (s == "auto") return {};
      const auto v = parse_long(s);
      if (!v || *v < 2) return "expected 'auto' or an integer >= 2, got '" + s + "'";
      return {};
    },
    "auto|INT>=2");

const CLI::Validator kRank(
    [](std::string& s) -> std::string {
      try {
        RankRule::parse(s);
      } catch (const Error& e) {
        return e.what();
      }
      return {};
    },
    "fixed:K|energy:F|universal");

const CLI::Validator kOrder(
    [](std::string& s) -> std::string {
      if (s == "grid") return {};
      const auto v = parse_long(s);
      if (!v || *v < 0) return "expected 'grid' or an integer >= 0, got '" + s + "'";
      return {};
    },
    "grid|INT>=0");

const auto kLayout = CLI::IsMember({"wide", "long"});

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestError("cannot write '" + path.string() + "'");
  out << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Wide files carry no time column, so their first row is placed right after
/// `t_last`. Long files keep their own time index.
TimePanel read_window(const std::string& path, const std::string& layout, long t_last) {
  auto panel = load_csv(path, parse_layout(layout));
  if (parse_layout(layout) == CsvLayout::Wide)
    panel = TimePanel(panel.names(), panel.values(), t_last + 1);
  return panel;
}

void emit(std::ostream& out, const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    out << text;
  else
    write_text(path, text);
}

json config_json(const SamossaConfig& c) {
  return {{"L", c.L}, {"shape_ratio", c.shape_ratio}, {"rank", c.rank.to_string()}, {"p", c.p}};
}

json spec_json(const GeneratorSpec& s) {
  return {{"kind", to_string(s.kind)},
          {"N", s.N},
          {"T", s.T},
          {"R", s.R},
          {"omega_min", s.omega_min},
          {"omega_max", s.omega_max},
          {"phase_min", s.phase_min},
          {"phase_max", s.phase_max},
          {"slope_min", s.slope_min},
          {"slope_max", s.slope_max},
          {"ar_order", s.ar_order},
          {"lambda_star", s.lambda_star},
          {"placement", to_string(s.placement)},
          {"alpha", s.alpha},
          {"noise_var", s.noise_var},
          {"seed", s.seed}};
}

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

struct ModelFlags {
  std::string L = "auto";
  double shape_ratio = 1.0;
  std::string rank = "energy:0.9";

  void add(CLI::App* app) {
    app->add_option("--L", L, "Page segment length, 'auto' for the default rule")
        ->check(kLength)
        ->capture_default_str();
    app->add_option("--shape-ratio", shape_ratio, "Shape ratio used by --L auto")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--rank", rank, "Rank rule: fixed:K, energy:F or universal")
        ->check(kRank)
        ->capture_default_str();
  }

  SamossaConfig config() const {
    SamossaConfig c;
    c.L = L == "auto" ? 0 : *parse_long(L);
    c.shape_ratio = shape_ratio;
    c.rank = RankRule::parse(rank);
    return c;
  }
};

struct Globals {
  int threads = 0;
  std::uint64_t seed = 1;
};

// --- synth -----------------------------------------------------------------

struct SynthCmd {
  std::string preset = "fig2";
  double lambda_star = 0.3;
  long N = 0;
  long T = 0;
  std::optional<double> noise_var;
  std::string output;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("synth", "Generate a synthetic panel with its ground truth");
    app->add_option("--preset", preset, "Generator preset")
        ->check(CLI::IsMember({"fig2", "table1", "pure-ar", "harmonics"}))
        ->capture_default_str();
    app->add_option("--lambda-star", lambda_star, "Largest AR root modulus (fig2, pure-ar)")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app->add_option("--N", N, "Number of series, 0 for the preset default")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app->add_option("--T", T, "Series length, 0 for the preset default")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app->add_option("--noise-var", noise_var, "Override the innovation variance")
        ->check(CLI::NonNegativeNumber);
    app->add_option("-o,--output", output, "Output directory")->required();
    app->final_callback([this] { pending = true; });
  }

  bool pending = false;

  int exec(const Globals& g, std::ostream& out) const {
    if (lambda_star <= 0.0 || lambda_star >= 1.0) throw UsageError("--lambda-star must lie in (0, 1)");
    GeneratorSpec spec;
    const auto n = [&](long v, Eigen::Index d) { return v > 0 ? static_cast<Eigen::Index>(v) : d; };
    if (preset == "fig2") {
      spec = GeneratorSpec::estimation(lambda_star, n(N, 10), n(T, 1000), g.seed);
    } else if (preset == "table1") {
      spec = GeneratorSpec::forecasting(n(N, 25), n(T, 10050), g.seed);
    } else if (preset == "pure-ar") {
      spec = GeneratorSpec::pure_ar(lambda_star, n(N, 10), n(T, 1000), g.seed);
    } else {
      spec = GeneratorSpec::estimation(lambda_star, n(N, 10), n(T, 2500), g.seed);
      spec.noise_var = 0.0;
    }
    if (noise_var) spec.noise_var = *noise_var;
    const auto data = generate(spec);

    const fs::path dir(output);
    fs::create_directories(dir);
    save_csv(data.y, dir / "y.csv");
    save_csv(data.f, dir / "f.csv");
    save_csv(data.x, dir / "x.csv");
    json alphas = json::array();
    for (const auto& a : data.alphas) alphas.push_back(to_vector(a));
    json truth = {{"preset", preset}, {"spec", spec_json(spec)}, {"alpha", alphas}};
    write_text(dir / "truth.json", truth.dump(2) + "\n");
    out << "wrote " << spec.N << " series of length " << spec.T << " to " << dir.string() << "\n";
    return kOk;
  }
};

// --- fit -------------------------------------------------------------------

struct FitCmd {
  std::string input;
  std::string layout = "wide";
  ModelFlags model;
  std::string p = "1";
  std::vector<long> orders = {0, 1, 2, 3};
  long valid_len = 25;
  std::string output;
  bool pending = false;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("fit", "Fit a model on a panel and save it as JSON");
    app->add_option("--input", input, "Training panel CSV")->required()->check(CLI::ExistingFile);
    app->add_option("--layout", layout, "CSV layout")->check(kLayout)->capture_default_str();
    model.add(app);
    app->add_option("--p", p, "AR order, or 'grid' to pick it on a validation tail")
        ->check(kOrder)
        ->capture_default_str();
    app->add_option("--orders", orders, "Orders tried by --p grid")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app->add_option("--valid-len", valid_len, "Validation tail length used by --p grid")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("-o,--output", output, "Model file")->required();
    app->final_callback([this] { pending = true; });
  }

  int exec(const Globals&, std::ostream& out) const {
    const auto panel = load_csv(input, parse_layout(layout));
    auto config = model.config();
    SamossaModel fitted;
    if (p == "grid") {
      if (valid_len >= panel.length()) throw UsageError("--valid-len must be shorter than the panel");
      const auto T = panel.length();
      const auto train = panel.slice(0, T - valid_len);
      const auto valid = panel.slice(T - valid_len, T);
      fitted = fit_with_order_search(train, valid, config, {orders.begin(), orders.end()});
    } else {
      config.p = {static_cast<Eigen::Index>(*parse_long(p))};
      fitted = fit(panel, config);
    }
    fitted.save(output);
    out << "L=" << fitted.L() << " k_hat=" << fitted.k_hat() << " p=" << fitted.config().p.front()
        << " -> " << output << "\n";
    return kOk;
  }
};

// --- decompose -------------------------------------------------------------

struct DecomposeCmd {
  std::string input;
  std::string layout = "wide";
  ModelFlags model;
  std::string output;
  bool pending = false;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("decompose", "Split a panel into deterministic and residual parts");
    app->add_option("--input", input, "Panel CSV")->required()->check(CLI::ExistingFile);
    app->add_option("--layout", layout, "CSV layout")->check(kLayout)->capture_default_str();
    model.add(app);
    app->add_option("-o,--output", output, "Output directory for f_hat.csv and x_hat.csv")->required();
    app->final_callback([this] { pending = true; });
  }

  int exec(const Globals&, std::ostream& out) const {
    const auto csv_layout = parse_layout(layout);
    const auto panel = load_csv(input, csv_layout);
    const auto config = model.config();
    const auto L = config.resolve_L(panel.num_series(), panel.length());
    const auto dec = decompose(panel, L, config.rank);
    const fs::path dir(output);
    fs::create_directories(dir);
    save_csv(TimePanel(panel.names(), dec.f_hat, dec.t_first), dir / "f_hat.csv", csv_layout);
    save_csv(TimePanel(panel.names(), dec.x_hat, dec.t_first), dir / "x_hat.csv", csv_layout);
    out << "L=" << dec.L << " k_hat=" << dec.k_hat << " t_first=" << dec.t_first << "\n";
    return kOk;
  }
};

// --- forecast --------------------------------------------------------------

struct ForecastCmd {
  std::string model;
  long horizon = 1;
  bool recursive = false;
  std::string layout = "wide";
  std::string output;
  bool pending = false;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("forecast", "Forecast from a saved model");
    app->add_option("--model", model, "Model file")->required()->check(CLI::ExistingFile);
    app->add_option("--horizon", horizon, "Steps ahead")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_flag("--recursive", recursive, "Feed forecasts back as observations (needed for --horizon > 1)");
    app->add_option("--layout", layout, "Output CSV layout")->check(kLayout)->capture_default_str();
    app->add_option("-o,--output", output, "Output CSV, '-' for stdout")->capture_default_str();
    app->final_callback([this] { pending = true; });
  }

  int exec(const Globals&, std::ostream& out) const {
    if (horizon > 1 && !recursive) throw UsageError("--horizon > 1 requires --recursive");
    const auto m = SamossaModel::load(model);
    const auto N = m.num_series();
    Eigen::MatrixXd values(N, horizon);
    for (Eigen::Index n = 0; n < N; ++n) {
      const auto path = m.forecast_recursive(n, horizon);
      for (Eigen::Index h = 0; h < horizon; ++h) values(n, h) = path[static_cast<std::size_t>(h)];
    }
    const TimePanel panel(m.series_names(), values, m.last_time(0) + 1);
    emit(out, output, to_csv(panel, parse_layout(layout)));
    return kOk;
  }
};

// --- observe-forecast ------------------------------------------------------

struct ObserveCmd {
  std::string model;
  std::string input;
  std::string layout = "wide";
  std::string output;
  std::string save_model;
  bool pending = false;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("observe-forecast",
                                    "Rolling one-step forecasts over a test panel");
    app->add_option("--model", model, "Model file")->required()->check(CLI::ExistingFile);
    app->add_option("--input", input, "Test panel CSV following the training data")
        ->required()
        ->check(CLI::ExistingFile);
    app->add_option("--layout", layout, "CSV layout")->check(kLayout)->capture_default_str();
    app->add_option("-o,--output", output, "Predictions CSV, '-' for stdout")->capture_default_str();
    app->add_option("--save-model", save_model, "Write the advanced model here");
    app->final_callback([this] { pending = true; });
  }

  int exec(const Globals&, std::ostream& out) const {
    auto m = SamossaModel::load(model);
    const auto test = read_window(input, layout, m.last_time(0));
    if (test.num_series() != m.num_series()) throw ShapeError("test panel has a different number of series");
    Eigen::MatrixXd pred(test.num_series(), test.length());
    for (Eigen::Index h = 0; h < test.length(); ++h)
      for (Eigen::Index n = 0; n < test.num_series(); ++n) {
        const auto step = m.forecast_step(n);
        if (step.t != test.t0() + h)
          throw StateError("test window starts at t=" + std::to_string(test.t0()) + " but the model expects t=" +
                           std::to_string(step.t - h));
        pred(n, h) = step.y_hat;
        m.observe(step, test(n, h));
      }
    emit(out, output, to_csv(TimePanel(test.names(), pred, test.t0()), parse_layout(layout)));
    if (!save_model.empty()) m.save(save_model);
    return kOk;
  }
};

// --- eval ------------------------------------------------------------------

struct EvalCmd {
  std::string model;
  std::string input;
  std::string layout = "wide";
  std::string truth;
  std::optional<double> min_r2;
  std::string output;
  bool pending = false;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("eval", "Rolling evaluation of a saved model on a test panel");
    app->add_option("--model", model, "Model file")->required()->check(CLI::ExistingFile);
    app->add_option("--input", input, "Test panel CSV following the training data")
        ->required()
        ->check(CLI::ExistingFile);
    app->add_option("--layout", layout, "CSV layout")->check(kLayout)->capture_default_str();
    app->add_option("--truth", truth, "Directory written by 'synth'; enables ForErr")
        ->check(CLI::ExistingDirectory);
    app->add_option("--min-r2", min_r2, "Exit with status 3 when mean R^2 falls below this");
    app->add_option("-o,--output", output, "JSON report, '-' for stdout")->capture_default_str();
    app->final_callback([this] { pending = true; });
  }

  int exec(const Globals&, std::ostream& out, std::ostream& err) const {
    const auto m = SamossaModel::load(model);
    const auto test = read_window(input, layout, m.last_time(0));
    std::optional<Eigen::MatrixXd> cond;
    if (!truth.empty()) {
      const fs::path dir(truth);
      const auto f = load_csv(dir / "f.csv");
      const auto x = load_csv(dir / "x.csv");
      json meta;
      try {
        meta = json::parse(read_text(dir / "truth.json"));
      } catch (const json::exception& e) {
        throw ParseError("truth.json: " + std::string(e.what()));
      }
      std::vector<Eigen::VectorXd> alphas;
      for (const auto& a : meta.at("alpha")) {
        const auto v = a.get<std::vector<double>>();
        alphas.emplace_back(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
      }
      cond = conditional_means(f, x, alphas, test.t0(), test.length());
    }
    const auto report = rolling_eval(m, test, cond);
    json j = {{"mean_r2", report.mean_r2},
              {"r2", report.r2},
              {"mse", report.mse},
              {"runtime_seconds", report.runtime_seconds},
              {"config", config_json(report.config)}};
    if (report.for_err) j["for_err"] = *report.for_err;
    emit(out, output, j.dump(2) + "\n");
    if (min_r2 && !(report.mean_r2 >= *min_r2)) {
      err << "samossa: acceptance: mean R^2 " << report.mean_r2 << " below " << *min_r2 << "\n";
      return kAcceptance;
    }
    return kOk;
  }
};

// --- grid ------------------------------------------------------------------

struct GridCmd {
  std::string input;
  std::string layout = "wide";
  long valid_len = 25;
  long test_len = 0;
  std::vector<std::string> ranks = {"universal", "energy:0.9", "fixed:5"};
  std::vector<double> ratios = {1.0, 3.0, 5.0};
  std::vector<long> orders = {0, 1, 2, 3};
  std::string L = "auto";
  std::string output;
  std::string best;
  std::string model_out;
  bool pending = false;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("grid", "Grid search on a validation tail");
    app->add_option("--input", input, "Panel CSV")->required()->check(CLI::ExistingFile);
    app->add_option("--layout", layout, "CSV layout")->check(kLayout)->capture_default_str();
    app->add_option("--valid-len", valid_len, "Validation tail length")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--test-len", test_len, "Trailing columns held out from the search")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app->add_option("--ranks", ranks, "Rank rules to try")->check(kRank)->capture_default_str();
    app->add_option("--shape-ratios", ratios, "Shape ratios to try")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--orders", orders, "AR orders to try")->check(CLI::NonNegativeNumber)->capture_default_str();
    app->add_option("--L", L, "Fixed segment length, 'auto' to derive it from each shape ratio")
        ->check(kLength)
        ->capture_default_str();
    app->add_option("-o,--output", output, "Per-configuration scores CSV, '-' for stdout")->capture_default_str();
    app->add_option("--best", best, "Write the selected configuration as JSON");
    app->add_option("--model-out", model_out, "Refit the selected configuration on train + valid and save it");
    app->final_callback([this] { pending = true; });
  }

  int exec(const Globals&, std::ostream& out) const {
    const auto panel = load_csv(input, parse_layout(layout));
    const auto T = panel.length();
    if (valid_len + test_len >= T) throw UsageError("--valid-len + --test-len must be shorter than the panel");
    const auto train = panel.slice(0, T - test_len - valid_len);
    const auto valid = panel.slice(T - test_len - valid_len, T - test_len);

    GridSpec grid;
    for (const auto& r : ranks) grid.ranks.push_back(RankRule::parse(r));
    grid.shape_ratios = ratios;
    grid.orders.assign(orders.begin(), orders.end());
    grid.L = L == "auto" ? 0 : *parse_long(L);
    const auto result = grid_search(train, valid, grid);

    std::ostringstream table;
    table << "index,rank,shape_ratio,p,L,k_hat,score,ok,error\n";
    for (std::size_t i = 0; i < result.points.size(); ++i) {
      const auto& pt = result.points[i];
      std::string error = pt.error;
      for (auto& c : error)
        if (c == ',' || c == '\n') c = ';';
      table << i << ',' << pt.config.rank.to_string() << ',' << format_double(pt.config.shape_ratio) << ','
            << pt.config.p.front() << ',' << pt.config.L << ',' << pt.k_hat << ','
            << (pt.ok ? format_double(pt.score) : "") << ',' << (pt.ok ? 1 : 0) << ',' << error << '\n';
    }
    emit(out, output, table.str());
    if (!best.empty()) {
      json j = config_json(result.best);
      j["index"] = result.best_index;
      j["score"] = result.points[result.best_index].score;
      write_text(best, j.dump(2) + "\n");
    }
    if (!model_out.empty()) {
      auto config = result.best;
      if (grid.L == 0) config.L = 0;
      fit(train.append(valid), config).save(model_out);
    }
    return kOk;
  }
};

// --- fig2 ------------------------------------------------------------------

struct Fig2Cmd {
  EstimationOptions opts;
  long seeds = 10;
  long N = 10;
  long k_hat = 6;
  long order = 2;
  std::string output;
  bool check = false;
  bool pending = false;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("fig2", "Estimation-error sweep over lambda* and sqrt(NT)");
    app->add_option("--lambda-stars", opts.lambda_stars, "Largest AR root moduli")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app->add_option("--sqrt-nt", opts.sqrt_nt, "sqrt(NT) sweep")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--seeds", seeds, "Seeds per point, starting at --seed")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--N", N, "Number of series")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--k-hat", k_hat, "Retained rank")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--order", order, "AR order fitted on the residuals")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("-o,--output", output, "Directory for rows.csv, summary.csv and summary.json")->required();
    app->add_flag("--check", check, "Apply the tolerance bands; exit with status 3 on failure");
    app->final_callback([this] { pending = true; });
  }

  int exec(const Globals& g, std::ostream& out) const {
    auto o = opts;
    for (double l : o.lambda_stars)
      if (l <= 0.0 || l >= 1.0) throw UsageError("--lambda-stars must lie in (0, 1)");
    o.seeds = static_cast<std::uint64_t>(seeds);
    o.first_seed = g.seed;
    o.N = N;
    o.k_hat = k_hat;
    o.ar_order = order;
    const auto report = estimation_experiment(o);

    const fs::path dir(output);
    fs::create_directories(dir);
    write_text(dir / "rows.csv", rows_to_csv(report));
    write_text(dir / "summary.csv", summary_to_csv(report));
    json slopes = json::array();
    for (const auto& s : report.slopes)
      slopes.push_back({{"lambda_star", s.lambda_star},
                        {"est_err_slope", s.est_err_slope},
                        {"alpha_sq_err_slope", s.alpha_sq_err_slope}});
    json checks = json::array();
    bool ok = true;
    for (const auto& c : check_estimation(report)) {
      checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
      ok = ok && c.pass;
      if (check) out << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    }
    write_text(dir / "summary.json", json{{"slopes", slopes}, {"checks", checks}}.dump(2) + "\n");
    return check && !ok ? kAcceptance : kOk;
  }
};

// --- table1 ----------------------------------------------------------------

struct Table1Cmd {
  long seeds = 5;
  ForecastOptions opts;
  long N = 25;
  long train = 10000;
  long valid = 25;
  long test = 25;
  std::string output;
  bool check = false;
  bool pending = false;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("table1", "Forecasting benchmark against the p = 0 ablation");
    app->add_option("--seeds", seeds, "Number of seeds, starting at --seed")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--N", N, "Number of series")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--train", train, "Training length")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--valid", valid, "Validation length")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--test", test, "Test length")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("-o,--output", output, "Per-seed CSV, '-' for stdout")->capture_default_str();
    app->add_flag("--check", check,
                  "Require median R^2 >= 0.40 and a median gap over the ablation >= 0.05; exit 3 otherwise");
    app->final_callback([this] { pending = true; });
  }

  int exec(const Globals& g, std::ostream& out, std::ostream& err) const {
    auto o = opts;
    o.N = N;
    o.train = train;
    o.valid = valid;
    o.test = test;
    std::ostringstream csv;
    csv << "seed,samossa_r2,mssa_r2,samossa_rank,samossa_shape_ratio,samossa_p,mssa_rank,mssa_shape_ratio\n";
    std::vector<double> r2, gap;
    for (long s = 0; s < seeds; ++s) {
      const auto c = forecast_experiment(g.seed + static_cast<std::uint64_t>(s), o);
      r2.push_back(c.samossa_r2);
      gap.push_back(c.samossa_r2 - c.mssa_r2);
      csv << c.seed << ',' << format_double(c.samossa_r2) << ',' << format_double(c.mssa_r2) << ','
          << c.samossa_config.rank.to_string() << ',' << format_double(c.samossa_config.shape_ratio) << ','
          << c.samossa_config.p.front() << ',' << c.mssa_config.rank.to_string() << ','
          << format_double(c.mssa_config.shape_ratio) << '\n';
    }
    emit(out, output, csv.str());
    const double mr2 = median(r2);
    const double mgap = median(gap);
    if (check && !(mr2 >= 0.40 && mgap >= 0.05)) {
      err << "samossa: acceptance: median R^2 " << mr2 << ", median gap " << mgap << "\n";
      return kAcceptance;
    }
    return kOk;
  }
};

std::string one_line(std::string s) {
  for (auto& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-stage decomposition and forecasting of multivariate time series", "samossa"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML file with default flag values; command-line flags take precedence");
  Globals g;
  app.add_option("--threads", g.threads, "Worker threads, 0 for all cores")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for every random draw")->capture_default_str();

  SynthCmd synth;
  FitCmd fitc;
  DecomposeCmd dec;
  ForecastCmd fc;
  ObserveCmd obs;
  EvalCmd ev;
  GridCmd grid;
  Fig2Cmd fig2;
  Table1Cmd table1;
  synth.add(app);
  fitc.add(app);
  dec.add(app);
  fc.add(app);
  obs.add(app);
  ev.add(app);
  grid.add(app);
  fig2.add(app);
  table1.add(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "samossa: usage: " << one_line(e.what()) << "\n";
    return kUsage;
  }

  set_num_threads(static_cast<unsigned>(g.threads));
  try {
    if (synth.pending) return synth.exec(g, out);
    if (fitc.pending) return fitc.exec(g, out);
    if (dec.pending) return dec.exec(g, out);
    if (fc.pending) return fc.exec(g, out);
    if (obs.pending) return obs.exec(g, out);
    if (ev.pending) return ev.exec(g, out, err);
    if (grid.pending) return grid.exec(g, out);
    if (fig2.pending) return fig2.exec(g, out);
    if (table1.pending) return table1.exec(g, out, err);
  } catch (const UsageError& e) {
    err << "samossa: usage: " << one_line(e.what()) << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "samossa: error: " << e.kind() << ": " << one_line(e.what()) << "\n";
    return kData;
  } catch (const fs::filesystem_error& e) {
    err << "samossa: error: IoError: " << one_line(e.what()) << "\n";
    return kData;
  } catch (const std::exception& e) {
    err << "samossa: error: " << one_line(e.what()) << "\n";
    return kData;
  }
  err << "samossa: usage: no subcommand given\n";
  return kUsage;
}

}  // namespace samossa::cli
