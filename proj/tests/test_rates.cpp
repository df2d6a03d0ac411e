#include "samossa/ar.hpp"
#include "samossa/eval.hpp"
#include "samossa/linear_forecaster.hpp"
#include "samossa/model.hpp"
#include "samossa/parallel.hpp"
#include "samossa/ssa_estimator.hpp"
#include "samossa/synth.hpp"

#include "support.hpp"

#include <cmath>

using namespace samossa;

namespace {

constexpr Eigen::Index kN = 10;
constexpr std::uint64_t kSeeds = 10;

std::vector<double> as_nt(const std::vector<Eigen::Index>& lengths) {
  std::vector<double> nt;
  for (const auto T : lengths) nt.push_back(static_cast<double>(kN * T));
  return nt;
}

/// Median over seeds of `metric(T, seed)` for each length.
template <class Metric>
std::vector<double> sweep(const std::vector<Eigen::Index>& lengths, Metric metric) {
  std::vector<double> values(lengths.size() * kSeeds);
  parallel_for(values.size(), [&](std::size_t j) {
    values[j] = metric(lengths[j / kSeeds], 1 + j % kSeeds);
  });
  std::vector<double> out;
  for (std::size_t i = 0; i < lengths.size(); ++i)
    out.push_back(median({values.begin() + static_cast<long>(i * kSeeds),
                          values.begin() + static_cast<long>((i + 1) * kSeeds)}));
  return out;
}

void report(const char* name, const std::vector<Eigen::Index>& lengths, const std::vector<double>& y,
            double slope) {
  std::string line = std::string(name) + ":";
  for (std::size_t i = 0; i < lengths.size(); ++i)
    line += " T=" + std::to_string(lengths[i]) + " " + std::to_string(y[i]);
  MESSAGE(line << " slope " << slope);
}

}  // namespace

TEST_CASE("EstErr decays with NT") {
  const std::vector<Eigen::Index> lengths{100, 400, 1600, 6400};
  const auto err = sweep(lengths, [](Eigen::Index T, std::uint64_t seed) {
    const auto data = generate(GeneratorSpec::estimation(0.3, kN, T, seed));
    const auto dec = decompose(data.y, default_L(kN, T), RankRule::fixed(6));
    return est_err(dec, data.f, 0);
  });
  const double slope = log_log_slope(as_nt(lengths), err);
  report("EstErr", lengths, err, slope);
  CHECK(slope <= -0.25);
  CHECK(slope >= -1.0);
}

TEST_CASE("beta converges to the noiseless minimum-norm recurrence") {
  const std::vector<Eigen::Index> lengths{1600, 3200, 6400, 12800, 25600};
  const auto err = sweep(lengths, [](Eigen::Index T, std::uint64_t seed) {
    const auto data = generate(GeneratorSpec::estimation(0.3, kN, T, seed));
    const Eigen::Index L = 128;
    const auto hat = fit_beta(data.y, L, RankRule::fixed(6));
    const auto star = fit_beta(data.f, L, RankRule::fixed(6));
    return (hat.beta - star.beta).squaredNorm();
  });
  const double slope = log_log_slope(as_nt(lengths), err);
  report("beta", lengths, err, slope);
  CHECK(slope >= -0.8);
  CHECK(slope <= -0.2);
}

TEST_CASE("AR coefficients are identified at the parametric rate") {
  const std::vector<Eigen::Index> lengths{500, 2000, 8000, 32000};
  const auto err = clean_ar_errors(0.3, lengths, 20);
  std::vector<double> t;
  for (const auto T : lengths) t.push_back(static_cast<double>(T));
  const double slope = log_log_slope(t, err);
  report("alpha", lengths, err, slope);
  CHECK(slope >= -1.3);
  CHECK(slope <= -0.7);
}

TEST_CASE("ForErr decays with NT") {
  const std::vector<Eigen::Index> lengths{100, 1000, 10000, 100000};
  const auto err = sweep(lengths, [](Eigen::Index T, std::uint64_t seed) {
    const auto data = generate(GeneratorSpec::estimation(0.3, kN, 2 * T, seed));
    SamossaConfig config;
    config.rank = RankRule::fixed(6);
    config.p = {2};
    const auto model = fit(data.y.slice(0, T), config);
    const auto truth = conditional_means(data.f, data.x, data.alphas, T + 1, T);
    return *rolling_eval(model, data.y.slice(T, 2 * T), truth).for_err;
  });
  const double slope = log_log_slope(as_nt(lengths), err);
  report("ForErr", lengths, err, slope);
  CHECK(slope <= -0.2);
}
