#include "conformal/sim.hpp"

#include "conformal/baseline.hpp"
#include "conformal/exact.hpp"
#include "conformal/numerics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace conformal {

double GeneratorSpec::eps_variance() const {
  if (id == Id::ExampleB) return 1.2 * 1.2 / 12.0;
  return eps_convention == EpsConvention::Variance02 ? 0.2 : std::sqrt(0.2);
}

std::string MethodShape::name() const {
  return (family == Family::Lm ? std::string("lm_") : std::string("conformal_")) +
         shape_name(shape);
}

std::vector<MethodShape> all_methods() {
  std::vector<MethodShape> out;
  for (auto family : {MethodShape::Family::Lm, MethodShape::Family::Conformal})
    for (auto shape : {IntervalShape::Upper, IntervalShape::Lower, IntervalShape::Bounded})
      out.push_back({family, shape});
  return out;
}

Draw generate(const GeneratorSpec& spec, std::uint64_t replication_index) {
  if (spec.n < 2) throw std::invalid_argument("generate: n must be >= 2");
  SplitMix64 rng(spec.seed, replication_index);
  const double eps_sd = std::sqrt(spec.eps_variance());

  std::vector<LabeledPoint> points;
  points.reserve(static_cast<std::size_t>(spec.n));
  for (long long i = 0; i < spec.n; ++i) {
    Eigen::VectorXd x(2);
    x[0] = rng.next_normal(0.0, std::sqrt(2.0));
    x[1] = rng.next_normal();
    double eps = spec.id == GeneratorSpec::Id::ExampleB ? rng.next_uniform(-0.6, 0.6)
                                                        : rng.next_normal(0.0, eps_sd);
    const double y = x[0] + x[1] + eps;
    points.push_back({std::move(x), y});
  }
  LabeledPoint holdout = std::move(points.back());
  points.pop_back();
  return Draw{make_sample(std::move(points)), std::move(holdout)};
}

double oracle_interval_length(const GeneratorSpec& spec, double alpha) {
  if (alpha <= 0.0 || alpha >= 1.0)
    throw std::invalid_argument("oracle_interval_length: alpha outside (0, 1)");
  if (spec.id == GeneratorSpec::Id::ExampleA) {
    const double sd = std::sqrt(3.0 + spec.eps_variance());
    return 2.0 * normal_quantile(1.0 - alpha / 2.0) * sd;
  }
  // Example B: Y = N(0, 3) + Unif(-0.6, 0.6).
  const double sd = std::sqrt(3.0);
  auto cdf = [&](double y) {
    return integrate([&](double u) { return normal_cdf((y - u) / sd); }, -0.6, 0.6, 1e-10) / 1.2;
  };
  const double hi = bisect_increasing(cdf, -30.0, 30.0, 1.0 - alpha / 2.0, 1e-8);
  const double lo = bisect_increasing(cdf, -30.0, 30.0, alpha / 2.0, 1e-8);
  return hi - lo;
}

SimulationReport run(const SimulationConfig& config) {
  if (config.replications < 1) throw std::invalid_argument("run: replications must be >= 1");
  if (config.alpha <= 0.0 || config.alpha >= 1.0)
    throw std::invalid_argument("run: alpha outside (0, 1)");
  if (config.methods.empty()) throw std::invalid_argument("run: no methods requested");

  const long long n_sample = config.generator.n - 1;
  bool wants_lm = false;
  for (const auto& m : config.methods) {
    if (m.family == MethodShape::Family::Lm) wants_lm = true;
    if (m.family == MethodShape::Family::Conformal &&
        floor_index((n_sample + 1) * config.alpha) < 2)
      throw std::invalid_argument("run: conformal methods need floor((n+1) alpha) >= 2");
  }

  const std::size_t n_methods = config.methods.size();
  std::vector<long long> hits(n_methods, 0);
  std::vector<double> length_sums(n_methods, 0.0);

  for (long long rep = 0; rep < config.replications; ++rep) {
    try {
      const Draw draw = generate(config.generator, static_cast<std::uint64_t>(rep));
      OlsFit fit;
      if (wants_lm) fit = ols_fit(draw.sample, true);

      for (std::size_t mi = 0; mi < n_methods; ++mi) {
        const MethodShape& m = config.methods[mi];
        PredictionRegion region = [&] {
          if (m.family == MethodShape::Family::Lm)
            return lm_interval(fit, draw.holdout.features, config.alpha, m.shape);
          if (m.shape == IntervalShape::Bounded &&
              config.bounded_variant == BoundedVariant::RankedEndpoints) {
            const double eta = config.fixed_eta
                                   ? *config.fixed_eta
                                   : default_eta(draw.sample, draw.holdout.features);
            return ranked_endpoint_bounded_interval(draw.sample, draw.holdout.features,
                                                    config.alpha, eta);
          }
          return exact_supervised_interval(draw.sample, draw.holdout.features, config.alpha,
                                           m.shape, config.fixed_eta);
        }();
        if (region.contains(draw.holdout.response)) ++hits[mi];
        if (m.shape == IntervalShape::Bounded) length_sums[mi] += region.length();
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("replication " + std::to_string(rep) + ": " + e.what());
    }
  }

  SimulationReport report;
  report.config = config;
  report.oracle_length = oracle_interval_length(config.generator, config.alpha);
  const double n_reps = static_cast<double>(config.replications);
  for (std::size_t mi = 0; mi < n_methods; ++mi) {
    MethodReport mr;
    mr.method = config.methods[mi];
    mr.hits = hits[mi];
    mr.coverage = static_cast<double>(hits[mi]) / n_reps;
    mr.mc_se = std::sqrt(mr.coverage * (1.0 - mr.coverage) / n_reps);
    if (mr.method.shape == IntervalShape::Bounded) {
      mr.mean_length = length_sums[mi] / n_reps;
      mr.length_ratio_full = mr.mean_length / report.oracle_length;
      mr.length_ratio_half = 0.5 * mr.length_ratio_full;
    } else {
      mr.mean_length = mr.length_ratio_full = mr.length_ratio_half =
          std::numeric_limits<double>::quiet_NaN();
    }
    report.methods.push_back(mr);
  }
  return report;
}

}  // namespace conformal
