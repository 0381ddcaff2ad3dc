#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "conformal/measures.hpp"
#include "conformal/numerics.hpp"
#include "conformal/plausibility.hpp"

#include <cmath>
#include <vector>

using namespace conformal;

namespace {

Sample sample_1d(const std::vector<std::pair<double, double>>& xy) {
  std::vector<LabeledPoint> pts;
  for (const auto& [x, y] : xy) {
    Eigen::VectorXd v(1);
    v << x;
    pts.push_back({std::move(v), y});
  }
  return make_sample(std::move(pts));
}

CandidatePoint cand_1d(double x, double y) {
  Eigen::VectorXd v(1);
  v << x;
  return CandidatePoint{std::move(v), y};
}

Sample random_integer_sample(SplitMix64& rng, int n, int p) {
  std::vector<LabeledPoint> pts;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd x(p);
    for (int j = 0; j < p; ++j) x[j] = static_cast<double>(rng.next_u64() % 7) - 3.0;
    pts.push_back({std::move(x), static_cast<double>(rng.next_u64() % 13) - 6.0});
  }
  return make_sample(std::move(pts));
}

}  // namespace

TEST_CASE("polynomial supervised measure, hand-evaluated") {
  const Sample sample = sample_1d({{1.0, 5.0}, {2.0, 7.0}});
  const CandidatePoint cand = cand_1d(3.0, 6.0);

  SUBCASE("pure identity term") {
    const auto m = polynomial_supervised({.beta1 = 1.0});
    const auto mu = nonconformity_scores(sample, cand, m);
    CHECK(mu[0] == doctest::Approx(5.0));
    CHECK(mu[1] == doctest::Approx(7.0));
    CHECK(mu[2] == doctest::Approx(6.0));
  }
  SUBCASE("pure square term") {
    const auto m = polynomial_supervised({.beta2 = 1.0});
    const auto mu = nonconformity_scores(sample, cand, m);
    CHECK(mu[0] == doctest::Approx(25.0));
    CHECK(mu[2] == doctest::Approx(36.0));
  }
  SUBCASE("identity minus own feature sum") {
    const auto m = polynomial_supervised({.beta1 = 1.0, .gamma = -1.0});
    const auto mu = nonconformity_scores(sample, cand, m);
    CHECK(mu[0] == doctest::Approx(4.0));  // 5 - 1
    CHECK(mu[1] == doctest::Approx(5.0));  // 7 - 2
    CHECK(mu[2] == doctest::Approx(3.0));  // 6 - 3
  }
  SUBCASE("bag-coupled term") {
    // mu_3 = 6 - (3 + 1 * ((5 - 1) + (7 - 2))) = -6
    const auto m = polynomial_supervised({.beta1 = 1.0, .gamma = -1.0, .eta = 1.0});
    const auto mu = nonconformity_scores(sample, cand, m);
    CHECK(mu[2] == doctest::Approx(-6.0));
    // mu_1 = 5 - (1 + ((7 - 2) + (6 - 3))) = -4
    CHECK(mu[0] == doctest::Approx(-4.0));
  }
}

TEST_CASE("polynomial unsupervised measure, hand-evaluated") {
  const std::vector<double> values = {2.0, 3.0};
  const auto m = polynomial_unsupervised({.lambda = 1.0, .theta = 0.0, .kappa = 1.0});
  const auto mu = nonconformity_scores(values, 3.0, m);
  CHECK(mu[0] == doctest::Approx(4.0 + 6.0));   // 2^2 + (3 + 3)
  CHECK(mu[1] == doctest::Approx(9.0 + 5.0));   // 3^2 + (2 + 3)
  CHECK(mu[2] == doctest::Approx(9.0 + 5.0));   // candidate: 3^2 + (2 + 3)
  const auto lin = polynomial_unsupervised({.lambda = 0.0, .theta = -1.0, .kappa = 1.0});
  CHECK(nonconformity_scores(values, 3.0, lin)[0] == doctest::Approx(-2.0 + 6.0));
}

TEST_CASE("catalog lookup") {
  CHECK(catalog_entry("ce1").supervised.has_value());
  CHECK(catalog_entry("ce1u").unsupervised.has_value());
  CHECK(catalog_entry("ce9").evaluation_only);
  CHECK_FALSE(catalog_entry("ce9").claim_supervised);
  CHECK_THROWS_AS(catalog_entry("nope"), std::invalid_argument);
  CHECK(counterexample_catalog().size() == 9);
}

TEST_CASE("alias entry scores identically to its base measure") {
  SplitMix64 rng(41);
  const Sample sample = random_integer_sample(rng, 6, 1);
  const CandidatePoint cand = cand_1d(1.0, 2.0);
  const auto mu1 = nonconformity_scores(sample, cand, *catalog_entry("ce1").supervised);
  const auto mu5 = nonconformity_scores(sample, cand, *catalog_entry("ce5").supervised);
  REQUIRE(mu1.size() == mu5.size());
  for (std::size_t i = 0; i < mu1.size(); ++i) CHECK(mu1[i] == mu5[i]);
}

TEST_CASE("claimed comparisons match the scores on random integer data") {
  // integer-valued inputs keep ties bit-exact, so claim and score comparison
  // must agree verbatim
  SplitMix64 rng(43);
  for (const char* id : {"ce1", "ce2", "ce4"}) {
    const auto& entry = catalog_entry(id);
    long long disagreements = 0;
    for (int rep = 0; rep < 2000; ++rep) {
      const int n = 2 + static_cast<int>(rng.next_u64() % 6);
      const Sample sample = random_integer_sample(rng, n, 1);
      Eigen::VectorXd xnew(1);
      xnew << static_cast<double>(rng.next_u64() % 7) - 3.0;
      const CandidatePoint cand{xnew, static_cast<double>(rng.next_u64() % 13) - 6.0};
      const auto mu = nonconformity_scores(sample, cand, *entry.supervised);
      for (int i = 0; i < n; ++i) {
        const bool by_scores = mu[static_cast<std::size_t>(i)] >= mu.back();
        const bool by_claim = entry.claim_supervised(sample, cand, static_cast<std::size_t>(i));
        if (by_scores != by_claim) ++disagreements;
      }
    }
    CHECK(disagreements == 0);
  }
  for (const char* id : {"ce1u", "ce2u", "ce4u"}) {
    const auto& entry = catalog_entry(id);
    long long disagreements = 0;
    for (int rep = 0; rep < 2000; ++rep) {
      const int n = 2 + static_cast<int>(rng.next_u64() % 6);
      std::vector<double> values;
      for (int i = 0; i < n; ++i) values.push_back(static_cast<double>(rng.next_u64() % 13) - 6.0);
      const double cand = static_cast<double>(rng.next_u64() % 13) - 6.0;
      const auto mu = nonconformity_scores(values, cand, *entry.unsupervised);
      for (int i = 0; i < n; ++i) {
        const bool by_scores = mu[static_cast<std::size_t>(i)] >= mu.back();
        const bool by_claim = entry.claim_unsupervised(values, cand, static_cast<std::size_t>(i));
        if (by_scores != by_claim) ++disagreements;
      }
    }
    CHECK(disagreements == 0);
  }
}

TEST_CASE("monotonicity labels are witnessed by direct evaluation") {
  SplitMix64 rng(47);
  const Sample bag_src = random_integer_sample(rng, 5, 1);
  Eigen::VectorXd xnew(1);
  xnew << 1.0;

  auto score_at = [&](const SupervisedMeasure& m, double y) {
    return nonconformity_scores(bag_src, CandidatePoint{xnew, y}, m).back();
  };

  SUBCASE("min-based and sum-of-squares-plus-identity are nondecreasing") {
    for (const char* id : {"ce1", "ce4"}) {
      const auto& m = *catalog_entry(id).supervised;
      double prev = score_at(m, -6.0);
      for (double y = -5.5; y <= 6.0; y += 0.5) {
        const double cur = score_at(m, y);
        CHECK(cur >= prev);
        prev = cur;
      }
    }
  }
  SUBCASE("square-plus-identity is not monotone") {
    const auto& m = *catalog_entry("ce2").supervised;
    // decreasing on the far left, increasing on the right
    CHECK(score_at(m, -4.0) > score_at(m, -3.0));
    CHECK(score_at(m, 1.0) < score_at(m, 2.0));
    CHECK(catalog_entry("ce2").monotonicity == Monotonicity::NonMonotone);
  }
  SUBCASE("restricted double-exponential measure is nondecreasing on its domain") {
    const auto& m = *catalog_entry("ce9").supervised;
    Sample small = sample_1d({{0.0, 0.5}, {1.0, -0.5}, {0.0, 1.0}});
    auto at = [&](double y) {
      return nonconformity_scores(small, CandidatePoint{xnew, y}, m).back();
    };
    double prev = at(-1.9);
    for (double y = -1.8; y <= 1.9; y += 0.1) {
      const double cur = at(y);
      CHECK(cur >= prev);
      prev = cur;
    }
  }
}

TEST_CASE("restricted measure rejects responses outside [-2, 2]") {
  const auto& m = *catalog_entry("ce9").supervised;
  const Sample sample = sample_1d({{0.0, 0.5}, {1.0, 1.0}});
  Eigen::VectorXd xnew(1);
  xnew << 0.0;
  CHECK_THROWS_AS(nonconformity_scores(sample, CandidatePoint{xnew, 2.5}, m), std::domain_error);
  const Sample wild = sample_1d({{0.0, 3.0}, {1.0, 1.0}});
  CHECK_THROWS_AS(nonconformity_scores(wild, CandidatePoint{xnew, 0.0}, m), std::domain_error);
  CHECK_NOTHROW(nonconformity_scores(sample, CandidatePoint{xnew, 1.99}, m));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(polynomial_supervised({.beta1 = std::nan("")}), std::invalid_argument);
  CHECK_THROWS_AS(polynomial_unsupervised({.lambda = std::numeric_limits<double>::infinity()}),
                  std::invalid_argument);
}
