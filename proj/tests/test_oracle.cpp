#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "conformal/exact.hpp"
#include "conformal/measures.hpp"
#include "conformal/numerics.hpp"
#include "conformal/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace conformal;

namespace {

constexpr double kTol = 1e-6;

Sample random_sample(SplitMix64& rng, int n, int p) {
  std::vector<LabeledPoint> pts;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd x(p);
    for (int j = 0; j < p; ++j) x[j] = rng.next_normal();
    pts.push_back({std::move(x), rng.next_normal(0.0, 2.0)});
  }
  return make_sample(std::move(pts));
}

double kth_smallest(std::vector<double> v, long long k) {
  std::nth_element(v.begin(), v.begin() + (k - 1), v.end());
  return v[static_cast<std::size_t>(k - 1)];
}

}  // namespace

TEST_CASE("scan_region recovers a hand-built membership set") {
  auto member = [](double y) { return (y > 1.0 && y < 2.0) || y > 3.0; };
  const auto result = scan_region(member, 0.0, 5.0, 4096, 1e-10);
  REQUIRE(result.region.intervals().size() == 2);
  CHECK(result.region.intervals()[0].lower == doctest::Approx(1.0).epsilon(kTol));
  CHECK(result.region.intervals()[0].upper == doctest::Approx(2.0).epsilon(kTol));
  CHECK(result.region.intervals()[1].lower == doctest::Approx(3.0).epsilon(kTol));
  // the second run reaches the window edge, so it is reported as a ray
  CHECK(result.region.intervals()[1].upper_infinite);
  CHECK(result.touched_upper_edge);
  CHECK_FALSE(result.touched_lower_edge);
}

TEST_CASE("alpha below 1/(n+1) yields the full line") {
  const auto measure =
      polynomial_supervised({.beta1 = 1.0, .beta2 = 0.0, .gamma = -1.0, .eta = 0.0});
  SplitMix64 rng(11);
  const Sample sample = random_sample(rng, 5, 1);
  Eigen::VectorXd xnew(1);
  xnew << 0.0;
  // 1/(n+1) = 1/6 > 0.15, so every candidate passes the strict threshold
  const auto result = region_oracle(sample, xnew, measure, 0.15);
  CHECK(result.region.kind() == PredictionRegion::Kind::FullLine);
}

TEST_CASE("oracle agrees with the one-sided closed form") {
  const auto upper_measure =
      polynomial_supervised({.beta1 = 1.0, .beta2 = 0.0, .gamma = -1.0, .eta = 0.0});
  const auto lower_measure =
      polynomial_supervised({.beta1 = -1.0, .beta2 = 0.0, .gamma = 1.0, .eta = 0.0});
  SplitMix64 rng(19);
  for (int rep = 0; rep < 10; ++rep) {
    const Sample sample = random_sample(rng, 12, 2);
    Eigen::VectorXd xnew(2);
    xnew << rng.next_normal(), rng.next_normal();
    const double alpha = 0.25;  // m = 3

    const auto upper = region_oracle(sample, xnew, upper_measure, alpha);
    REQUIRE(upper.region.kind() == PredictionRegion::Kind::LeftRay);
    const auto closed_upper = exact_upper_interval(sample, xnew, alpha);
    CHECK(upper.region.intervals()[0].upper ==
          doctest::Approx(closed_upper.intervals()[0].upper).epsilon(kTol));

    const auto lower = region_oracle(sample, xnew, lower_measure, alpha);
    REQUIRE(lower.region.kind() == PredictionRegion::Kind::RightRay);
    const auto closed_lower = exact_lower_interval(sample, xnew, alpha);
    CHECK(lower.region.intervals()[0].lower ==
          doctest::Approx(closed_lower.intervals()[0].lower).epsilon(kTol));
  }
}

TEST_CASE("sum-of-squares-plus-identity region splits into two rays") {
  const auto& entry = catalog_entry("ce4");
  SplitMix64 rng(23);
  std::vector<double> values;
  std::vector<LabeledPoint> pts;
  const int n = 15;
  for (int i = 0; i < n; ++i) {
    const double y = rng.next_uniform();
    values.push_back(y);
    pts.push_back({Eigen::VectorXd(0), y});
  }
  const Sample sample = make_sample(std::move(pts));
  const double alpha = 0.3;  // m = 4
  const auto result =
      region_oracle(sample, Eigen::VectorXd(0), *entry.supervised, alpha, {-4.0, 5.0});
  REQUIRE(result.region.intervals().size() == 2);

  // membership holds outside (0.5 - h, 0.5 + h) with h the m-th smallest |y_i - 0.5|
  std::vector<double> h;
  for (double y : values) h.push_back(std::fabs(y - 0.5));
  const auto rc = rank_constants(n, alpha);
  const double half = kth_smallest(h, rc.m);
  CHECK(result.region.intervals()[0].upper == doctest::Approx(0.5 - half).epsilon(kTol));
  CHECK(result.region.intervals()[1].lower == doctest::Approx(0.5 + half).epsilon(kTol));
  CHECK_FALSE(result.region.contains(0.5));
}

TEST_CASE("a narrow window is reported through the edge flags") {
  const auto measure =
      polynomial_supervised({.beta1 = 0.0, .beta2 = 1.0, .gamma = -1.0, .eta = 4.0});
  SplitMix64 rng(29);
  const Sample sample = random_sample(rng, 10, 1);
  Eigen::VectorXd xnew(1);
  xnew << 0.1;
  ScanSpec narrow;
  narrow.window_lo = -2.05;
  narrow.window_hi = -1.95;  // well inside the bounded region
  const auto result = region_oracle(sample, xnew, measure, 0.25, narrow);
  CHECK(result.touched_lower_edge);
  CHECK(result.touched_upper_edge);
}

TEST_CASE("the oracle is deterministic") {
  const auto& entry = catalog_entry("ce1");
  SplitMix64 rng(31);
  const Sample sample = random_sample(rng, 9, 1);
  Eigen::VectorXd xnew(1);
  xnew << 0.7;
  const auto a = region_oracle(sample, xnew, *entry.supervised, 0.3);
  const auto b = region_oracle(sample, xnew, *entry.supervised, 0.3);
  REQUIRE(a.region.intervals().size() == b.region.intervals().size());
  for (std::size_t i = 0; i < a.region.intervals().size(); ++i) {
    CHECK(a.region.intervals()[i].lower == b.region.intervals()[i].lower);
    CHECK(a.region.intervals()[i].upper == b.region.intervals()[i].upper);
  }
}

TEST_CASE("unsupervised oracle matches the order-statistic closed form") {
  SplitMix64 rng(37);
  std::vector<double> values;
  for (int i = 0; i < 11; ++i) values.push_back(rng.next_normal(0.0, 3.0));
  const double alpha = 0.3;  // m = 3
  const auto measure = polynomial_unsupervised({.lambda = 0.0, .theta = 1.0, .kappa = 0.0});
  const auto result = region_oracle_unsupervised(values, measure, alpha);
  REQUIRE(result.region.kind() == PredictionRegion::Kind::LeftRay);
  const auto closed = exact_unsupervised_interval(values, alpha, IntervalShape::Upper);
  CHECK(result.region.intervals()[0].upper ==
        doctest::Approx(closed.intervals()[0].upper).epsilon(kTol));
}
