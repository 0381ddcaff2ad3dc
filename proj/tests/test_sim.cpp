#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "conformal/numerics.hpp"
#include "conformal/sim.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace conformal;

TEST_CASE("generate is deterministic in (seed, replication index)") {
  GeneratorSpec spec;
  spec.n = 25;
  spec.seed = 1234;
  const Draw a = generate(spec, 7);
  const Draw b = generate(spec, 7);
  const Draw c = generate(spec, 8);
  REQUIRE(a.sample.size() == 24);
  CHECK(a.holdout.response == b.holdout.response);
  CHECK(a.sample.points[3].response == b.sample.points[3].response);
  CHECK((a.sample.points[3].features - b.sample.points[3].features).norm() == 0.0);
  CHECK(a.holdout.response != c.holdout.response);

  // the draw for an index does not depend on which indices were drawn before
  generate(spec, 0);
  generate(spec, 100);
  const Draw again = generate(spec, 7);
  CHECK(again.holdout.response == a.holdout.response);
}

TEST_CASE("generator moments match the data model") {
  GeneratorSpec spec;
  spec.n = 2;
  spec.seed = 5150;
  const long long reps = 50000;
  double sx1 = 0, sx1_2 = 0, sy2 = 0;
  for (long long rep = 0; rep < reps; ++rep) {
    const Draw d = generate(spec, static_cast<std::uint64_t>(rep));
    const double x1 = d.holdout.features[0];
    sx1 += x1;
    sx1_2 += x1 * x1;
    sy2 += d.holdout.response * d.holdout.response;
  }
  const double n = static_cast<double>(reps);
  const double mean_x1 = sx1 / n;
  const double var_x1 = sx1_2 / n - mean_x1 * mean_x1;
  CHECK(mean_x1 == doctest::Approx(0.0).epsilon(0.05));
  CHECK(var_x1 == doctest::Approx(2.0).epsilon(0.03));
  // Var(Y) = 2 + 1 + 0.2
  CHECK(sy2 / n == doctest::Approx(3.2).epsilon(0.03));

  spec.id = GeneratorSpec::Id::ExampleB;
  double sy2b = 0;
  for (long long rep = 0; rep < reps; ++rep) {
    const Draw d = generate(spec, static_cast<std::uint64_t>(rep));
    sy2b += d.holdout.response * d.holdout.response;
  }
  // Var(Y) = 3 + 1.2^2 / 12
  CHECK(sy2b / n == doctest::Approx(3.12).epsilon(0.03));
}

TEST_CASE("epsilon variance conventions") {
  GeneratorSpec spec;
  CHECK(spec.eps_variance() == doctest::Approx(0.2));
  spec.eps_convention = GeneratorSpec::EpsConvention::VarianceSqrt02;
  CHECK(spec.eps_variance() == doctest::Approx(std::sqrt(0.2)));
  spec.id = GeneratorSpec::Id::ExampleB;
  CHECK(spec.eps_variance() == doctest::Approx(0.12));
}

TEST_CASE("analytic oracle length for the normal-error model") {
  GeneratorSpec spec;  // ExampleA
  const double len = oracle_interval_length(spec, 0.1);
  CHECK(len == doctest::Approx(2.0 * 1.6448536269514722 * std::sqrt(3.2)).epsilon(1e-9));
  CHECK(len == doctest::Approx(5.8850).epsilon(1e-4));
  CHECK_THROWS_AS(oracle_interval_length(spec, 0.0), std::invalid_argument);
}

TEST_CASE("convolution oracle length checked against a large monte carlo") {
  GeneratorSpec spec;
  spec.id = GeneratorSpec::Id::ExampleB;
  const double alpha = 0.1;
  const double len = oracle_interval_length(spec, alpha);
  // the marginal is symmetric about zero, so the upper endpoint is len / 2
  const double hi = len / 2.0;
  SplitMix64 rng(9001);
  const long long reps = 1000000;
  long long below = 0;
  for (long long i = 0; i < reps; ++i) {
    const double y = rng.next_normal(0.0, std::sqrt(3.0)) + rng.next_uniform(-0.6, 0.6);
    if (y <= hi) ++below;
  }
  const double frac = static_cast<double>(below) / static_cast<double>(reps);
  const double se = std::sqrt(0.95 * 0.05 / static_cast<double>(reps));
  CHECK(std::fabs(frac - 0.95) <= 3.0 * se);
}

TEST_CASE("run is deterministic and validates its inputs") {
  SimulationConfig config;
  config.generator.n = 101;
  config.generator.seed = 7;
  config.replications = 20;
  config.alpha = 0.1;
  config.methods = all_methods();
  REQUIRE(config.methods.size() == 6);

  const SimulationReport a = run(config);
  const SimulationReport b = run(config);
  REQUIRE(a.methods.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(a.methods[i].hits == b.methods[i].hits);
    if (a.methods[i].method.shape == IntervalShape::Bounded)
      CHECK(a.methods[i].mean_length == b.methods[i].mean_length);
  }

  SimulationConfig bad = config;
  bad.replications = 0;
  CHECK_THROWS_AS(run(bad), std::invalid_argument);
  bad = config;
  bad.methods.clear();
  CHECK_THROWS_AS(run(bad), std::invalid_argument);
  bad = config;
  bad.generator.n = 20;
  bad.alpha = 0.05;  // floor(20 * 0.05) = 1: conformal ranks undefined
  CHECK_THROWS_AS(run(bad), std::invalid_argument);
}

TEST_CASE("single-replication report is degenerate") {
  SimulationConfig config;
  config.generator.n = 101;
  config.generator.seed = 7;
  config.replications = 1;
  config.methods = all_methods();
  const SimulationReport report = run(config);
  for (const auto& m : report.methods) {
    CHECK((m.coverage == 0.0 || m.coverage == 1.0));
    CHECK(m.mc_se == 0.0);
  }
}

TEST_CASE("conformal coverage on a small study is at least nominal") {
  SimulationConfig config;
  config.generator.n = 101;
  config.generator.seed = 321;
  config.replications = 400;
  config.alpha = 0.1;
  config.methods = {{MethodShape::Family::Conformal, IntervalShape::Upper},
                    {MethodShape::Family::Conformal, IntervalShape::Lower}};
  const SimulationReport report = run(config);
  const double se = std::sqrt(0.9 * 0.1 / 400.0);
  for (const auto& m : report.methods) CHECK(m.coverage >= 0.9 - 3.0 * se);
}

TEST_CASE("full membership region is at least as long as the ranked-endpoint one") {
  SimulationConfig config;
  config.generator.n = 101;
  config.generator.seed = 55;
  config.replications = 100;
  config.methods = {{MethodShape::Family::Conformal, IntervalShape::Bounded}};
  const SimulationReport ranked = run(config);
  config.bounded_variant = BoundedVariant::FullRegion;
  const SimulationReport full = run(config);
  CHECK(full.methods[0].mean_length >= ranked.methods[0].mean_length);
  CHECK(full.methods[0].hits >= ranked.methods[0].hits);
  CHECK(ranked.methods[0].length_ratio_half ==
        doctest::Approx(0.5 * ranked.methods[0].length_ratio_full));
}

TEST_CASE("method names") {
  CHECK(MethodShape{MethodShape::Family::Lm, IntervalShape::Upper}.name() == "lm_upper");
  CHECK(MethodShape{MethodShape::Family::Conformal, IntervalShape::Bounded}.name() ==
        "conformal_bounded");
}
