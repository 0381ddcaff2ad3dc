#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "conformal/measures.hpp"
#include "conformal/numerics.hpp"
#include "conformal/plausibility.hpp"
#include "conformal/sim.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace conformal;

namespace {

CandidatePoint scalar_candidate(double y) { return CandidatePoint{Eigen::VectorXd(0), y}; }

}  // namespace

TEST_CASE("threshold is floor((n+1) alpha) / (n+1)") {
  CHECK(threshold(9, 0.3) == doctest::Approx(0.3));
  CHECK(threshold(1000, 0.1) == doctest::Approx(100.0 / 1001.0));
  CHECK(threshold(4, 0.5) == doctest::Approx(0.4));
  CHECK(threshold(4, 0.41) == doctest::Approx(0.4));
}

TEST_CASE("all-tied scores give plausibility one") {
  const auto measure = polynomial_unsupervised({.lambda = 0.0, .theta = 1.0, .kappa = 0.0});
  const auto pl = plausibility_unsupervised({2.0, 2.0, 2.0}, 2.0, measure);
  CHECK(pl.count == 4);
  CHECK(pl.denominator == 4);
  CHECK(pl.value() == doctest::Approx(1.0));
}

TEST_CASE("a strictly largest candidate score gives 1/(n+1)") {
  const auto measure = polynomial_unsupervised({.lambda = 0.0, .theta = 1.0, .kappa = 0.0});
  const auto pl = plausibility_unsupervised({1.0, 2.0, 3.0}, 9.0, measure);
  CHECK(pl.count == 1);
  CHECK(pl.denominator == 4);
}

TEST_CASE("sum-of-squares-plus-identity measure on (3, 1, 2) at 1.5") {
  // its comparison reduces to Y_{n+1} <= Y_i, so exactly y = 1 fails
  const auto& entry = catalog_entry("ce2");
  const Sample sample = make_sample(std::vector<double>{3.0, 1.0, 2.0});
  const auto pl = plausibility(sample, scalar_candidate(1.5), *entry.supervised);
  CHECK(pl.count == 3);
  CHECK(pl.denominator == 4);
}

TEST_CASE("identity measure on (1, 2, 3) at 2.5") {
  const auto measure = polynomial_unsupervised({.lambda = 0.0, .theta = 1.0, .kappa = 0.0});
  const auto pl = plausibility_unsupervised({1.0, 2.0, 3.0}, 2.5, measure);
  CHECK(pl.count == 2);
  CHECK(pl.denominator == 4);
}

TEST_CASE("min-based measure on (0, 10) at 5 keeps every comparison") {
  const auto& entry = catalog_entry("ce1u");
  // mu = (5, 10, 5): the candidate ties index 1 and its own score
  const auto pl = plausibility_unsupervised({0.0, 10.0}, 5.0, *entry.unsupervised);
  CHECK(pl.count == 3);
  CHECK(pl.denominator == 3);
}

TEST_CASE("score differences of the squares measure collapse to response differences") {
  SplitMix64 rng(2024);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<LabeledPoint> pts;
    const int n = 2 + static_cast<int>(rng.next_u64() % 6);
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd x(2);
      x << rng.next_normal(), rng.next_normal();
      pts.push_back({std::move(x), rng.next_normal(0.0, 3.0)});
    }
    const Sample sample = make_sample(std::move(pts));
    Eigen::VectorXd xnew(2);
    xnew << rng.next_normal(), rng.next_normal();
    const CandidatePoint cand{xnew, rng.next_normal(0.0, 3.0)};
    const auto mu = nonconformity_scores(sample, cand, *catalog_entry("ce2").supervised);
    for (int i = 0; i < n; ++i) {
      const double lhs = mu[static_cast<std::size_t>(i)] - mu.back();
      const double rhs = sample.points[static_cast<std::size_t>(i)].response - cand.response;
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
  }
}

TEST_CASE("plausibility is invariant under sample permutation") {
  SplitMix64 rng(77);
  std::vector<LabeledPoint> pts;
  for (int i = 0; i < 7; ++i) {
    Eigen::VectorXd x(1);
    x << rng.next_normal();
    pts.push_back({std::move(x), rng.next_normal()});
  }
  Eigen::VectorXd xnew(1);
  xnew << 0.4;
  const CandidatePoint cand{xnew, 0.3};

  for (const char* id : {"ce1", "ce2", "ce4"}) {
    const auto& measure = *catalog_entry(id).supervised;
    auto shuffled = pts;
    const auto base = plausibility(make_sample(pts), cand, measure);
    for (int round = 0; round < 5; ++round) {
      for (std::size_t i = shuffled.size(); i > 1; --i)
        std::swap(shuffled[i - 1], shuffled[rng.next_u64() % i]);
      const auto permuted = plausibility(make_sample(shuffled), cand, measure);
      CHECK(permuted.count == base.count);
      CHECK(permuted.denominator == base.denominator);
    }
  }
}

TEST_CASE("self comparison always counts") {
  SplitMix64 rng(31);
  const auto measure = polynomial_unsupervised({.lambda = 1.0, .theta = -2.0, .kappa = 0.5});
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> values;
    const int n = 1 + static_cast<int>(rng.next_u64() % 9);
    for (int i = 0; i < n; ++i) values.push_back(rng.next_normal());
    const auto pl = plausibility_unsupervised(values, rng.next_normal(), measure);
    CHECK(pl.count >= 1);
    CHECK(pl.denominator == n + 1);
  }
}

TEST_CASE("non-finite scores and dimension mismatches raise") {
  const Sample sample = make_sample(std::vector<double>{1.0, 2.0});
  SupervisedMeasure bad{"bad", [](const SupervisedBag&, const LabeledPoint&) {
                          return std::numeric_limits<double>::infinity();
                        }};
  CHECK_THROWS_AS(nonconformity_scores(sample, scalar_candidate(0.0), bad), std::domain_error);

  std::vector<LabeledPoint> pts;
  Eigen::VectorXd x(2);
  x << 1.0, 2.0;
  pts.push_back({x, 1.0});
  pts.push_back({x, 2.0});
  const Sample wide = make_sample(std::move(pts));
  const auto& measure = *catalog_entry("ce2").supervised;
  Eigen::VectorXd xnew(1);
  xnew << 1.0;
  CHECK_THROWS_AS(nonconformity_scores(wide, CandidatePoint{xnew, 0.0}, measure),
                  std::invalid_argument);
}

TEST_CASE("finite-sample validity of the plausibility threshold rule") {
  // P{ pl(Y_{n+1}) <= t_n(alpha) } <= alpha for exchangeable draws
  const auto measure =
      polynomial_supervised({.beta1 = 1.0, .beta2 = 0.0, .gamma = -1.0, .eta = 0.0});
  GeneratorSpec spec;
  spec.n = 20;  // 19 sample points plus the holdout
  spec.seed = 4242;
  const long long reps = 2000;
  for (double alpha : {0.1, 0.25}) {
    const double t = threshold(spec.n - 1, alpha);
    long long rejections = 0;
    for (long long rep = 0; rep < reps; ++rep) {
      const Draw draw = generate(spec, static_cast<std::uint64_t>(rep));
      const auto pl = plausibility(draw.sample, draw.holdout, measure);
      if (pl.value() <= t + 1e-12) ++rejections;
    }
    const double freq = static_cast<double>(rejections) / static_cast<double>(reps);
    const double se = std::sqrt(alpha * (1.0 - alpha) / static_cast<double>(reps));
    CHECK(freq <= alpha + 3.0 * se);
  }
}

TEST_CASE("plausibility of the holdout is discretely uniform") {
  // with continuous scores, pl(Y_{n+1}) ~ Uniform{1/(n+1), ..., 1}
  const auto measure =
      polynomial_supervised({.beta1 = 1.0, .beta2 = 0.0, .gamma = -1.0, .eta = 0.0});
  GeneratorSpec spec;
  spec.n = 10;
  spec.seed = 555;
  const long long reps = 10000;
  std::vector<long long> counts(static_cast<std::size_t>(spec.n), 0);
  for (long long rep = 0; rep < reps; ++rep) {
    const Draw draw = generate(spec, static_cast<std::uint64_t>(rep));
    const auto pl = plausibility(draw.sample, draw.holdout, measure);
    REQUIRE(pl.denominator == spec.n);
    REQUIRE(pl.count >= 1);
    REQUIRE(pl.count <= spec.n);
    ++counts[static_cast<std::size_t>(pl.count - 1)];
  }
  const double expected = static_cast<double>(reps) / static_cast<double>(spec.n);
  double chi2 = 0.0;
  for (long long c : counts) {
    const double d = static_cast<double>(c) - expected;
    chi2 += d * d / expected;
  }
  CHECK(chi2 < chi_square_quantile(spec.n - 1, 0.999));
}
