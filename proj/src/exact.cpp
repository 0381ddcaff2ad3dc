#include "conformal/exact.hpp"

#include "conformal/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace conformal {

RankConstants rank_constants(long long n, double alpha) {
  if (n < 1) throw std::invalid_argument("rank_constants: n must be >= 1");
  if (alpha <= 0.0 || alpha >= 1.0)
    throw std::invalid_argument("rank_constants: alpha outside (0, 1)");
  RankConstants rc;
  rc.n = n;
  rc.m = floor_index((n + 1) * alpha);
  const long long f = floor_index((n + 1) * (1.0 - alpha));
  rc.r1 = std::min(n, f + 1);
  rc.r2 = (n + 1) - f;
  rc.r3 = (n + 1) - rc.m;
  return rc;
}

std::optional<PredictionRegion> trivial_region_guard(long long n, double alpha) {
  if (rank_constants(n, alpha).trivial()) return PredictionRegion::full_line();
  return std::nullopt;
}

Eigen::VectorXd shift_scores(const Sample& sample, const Eigen::VectorXd& features_new) {
  if (features_new.size() != sample.feature_dim)
    throw std::invalid_argument("shift_scores: feature dimension mismatch");
  const double s_new = features_new.sum();
  Eigen::VectorXd a(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i)
    a[i] = (s_new - sample.points[i].features.sum()) + sample.points[i].response;
  return a;
}

BoundedScores bounded_scores(const Sample& sample, const Eigen::VectorXd& features_new,
                             double eta) {
  if (features_new.size() != sample.feature_dim)
    throw std::invalid_argument("bounded_scores: feature dimension mismatch");
  const double s_new = features_new.sum();
  const auto n = static_cast<Eigen::Index>(sample.size());
  BoundedScores bs{Eigen::VectorXd(n), Eigen::VectorXd(n), Eigen::VectorXd(n), Eigen::VectorXd(n),
                   Eigen::VectorXd(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& pt = sample.points[static_cast<std::size_t>(i)];
    const double shift = s_new - pt.features.sum();
    bs.c[i] = pt.response + shift;
    bs.d[i] = pt.response * pt.response + shift;
    const double radicand = eta * eta / 4.0 + eta * bs.c[i] + bs.d[i];
    if (radicand < 0.0)
      throw std::invalid_argument("bounded_scores: eta below the admissible bound (negative radicand)");
    bs.s[i] = std::sqrt(radicand);
    bs.a[i] = -bs.s[i] - eta / 2.0;
    bs.b[i] = bs.s[i] - eta / 2.0;
  }
  return bs;
}

namespace {

double eta_bound(const Sample& sample, const Eigen::VectorXd& features_new, double pad) {
  if (features_new.size() != sample.feature_dim)
    throw std::invalid_argument("eta bound: feature dimension mismatch");
  const double s_new = features_new.sum();
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& pt : sample.points) {
    const double shift = s_new - pt.features.sum();
    const double c = pt.response + shift;
    const double d = pt.response * pt.response + shift;
    best = std::max(best, 2.0 * (std::sqrt(std::max(0.0, c * c - d) + pad) - c));
  }
  return best;
}

// k-th smallest (1-based) of v, duplicates retained.
double order_statistic(Eigen::VectorXd v, long long k) {
  std::vector<double> w(v.data(), v.data() + v.size());
  std::nth_element(w.begin(), w.begin() + (k - 1), w.end());
  return w[static_cast<std::size_t>(k - 1)];
}

}  // namespace

double min_eta(const Sample& sample, const Eigen::VectorXd& features_new) {
  return eta_bound(sample, features_new, 0.0);
}

double default_eta(const Sample& sample, const Eigen::VectorXd& features_new) {
  return eta_bound(sample, features_new, 1.0);
}

PredictionRegion exact_upper_interval(const Sample& sample, const Eigen::VectorXd& features_new,
                                      double alpha) {
  const auto rc = rank_constants(static_cast<long long>(sample.size()), alpha);
  if (rc.trivial()) return PredictionRegion::full_line();
  const Eigen::VectorXd a = shift_scores(sample, features_new);
  // Membership: #{i : y <= a_i} >= m, so the endpoint is the (n+1-m)-th
  // smallest a_i and the endpoint itself is a member.
  const double endpoint = order_statistic(a, rc.n + 1 - rc.m);
  const bool closed = (a.array() >= endpoint).count() >= rc.m;
  return PredictionRegion::left_ray(endpoint, closed);
}

PredictionRegion exact_lower_interval(const Sample& sample, const Eigen::VectorXd& features_new,
                                      double alpha) {
  const auto rc = rank_constants(static_cast<long long>(sample.size()), alpha);
  if (rc.trivial()) return PredictionRegion::full_line();
  const Eigen::VectorXd a = shift_scores(sample, features_new);
  // Mirror rule: #{i : y >= a_i} >= m, endpoint a_(m).
  const double endpoint = order_statistic(a, rc.m);
  const bool closed = (a.array() <= endpoint).count() >= rc.m;
  return PredictionRegion::right_ray(endpoint, closed);
}

PredictionRegion exact_bounded_interval(const Sample& sample, const Eigen::VectorXd& features_new,
                                        double alpha, double eta) {
  const auto rc = rank_constants(static_cast<long long>(sample.size()), alpha);
  if (rc.trivial()) return PredictionRegion::full_line();
  if (eta < min_eta(sample, features_new))
    throw std::invalid_argument("exact_bounded_interval: eta below the admissible bound");
  const BoundedScores bs = bounded_scores(sample, features_new, eta);
  // All candidate intervals share the center -eta/2, so membership in at
  // least m of them reduces to |y + eta/2| <= s_((n+1-m)).
  const double half_width = order_statistic(bs.s, rc.n + 1 - rc.m);
  const double lower = -half_width - eta / 2.0;
  const double upper = half_width - eta / 2.0;
  const auto member = [&](double y) {
    return ((y + eta / 2.0) * (y + eta / 2.0) <=
            (eta * eta / 4.0 + eta * bs.c.array() + bs.d.array()))
               .count() >= rc.m;
  };
  return PredictionRegion::bounded(lower, upper, member(lower), member(upper));
}

PredictionRegion ranked_endpoint_bounded_interval(const Sample& sample,
                                                  const Eigen::VectorXd& features_new,
                                                  double alpha, double eta) {
  const auto rc = rank_constants(static_cast<long long>(sample.size()), alpha);
  if (rc.trivial()) return PredictionRegion::full_line();
  if (eta < min_eta(sample, features_new))
    throw std::invalid_argument("ranked_endpoint_bounded_interval: eta below the admissible bound");
  const BoundedScores bs = bounded_scores(sample, features_new, eta);
  const double lower = order_statistic(bs.a, rc.r1);
  const double upper = order_statistic(bs.b, rc.r3);
  return PredictionRegion::bounded(lower, upper, false, false);
}

PredictionRegion exact_supervised_interval(const Sample& sample,
                                           const Eigen::VectorXd& features_new, double alpha,
                                           IntervalShape shape, std::optional<double> eta) {
  switch (shape) {
    case IntervalShape::Upper: return exact_upper_interval(sample, features_new, alpha);
    case IntervalShape::Lower: return exact_lower_interval(sample, features_new, alpha);
    case IntervalShape::Bounded:
      return exact_bounded_interval(sample, features_new, alpha,
                                    eta.value_or(default_eta(sample, features_new)));
  }
  throw std::invalid_argument("exact_supervised_interval: unknown shape");
}

PredictionRegion exact_unsupervised_interval(const std::vector<double>& values, double alpha,
                                             IntervalShape shape, std::optional<double> kappa) {
  if (values.empty()) throw std::invalid_argument("exact_unsupervised_interval: empty sample");
  const auto rc = rank_constants(static_cast<long long>(values.size()), alpha);
  if (rc.trivial()) return PredictionRegion::full_line();
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(values.data(),
                                                        static_cast<Eigen::Index>(values.size()));
  switch (shape) {
    case IntervalShape::Upper: {
      const double endpoint = order_statistic(x, rc.n + 1 - rc.m);
      const bool closed = (x.array() >= endpoint).count() >= rc.m;
      return PredictionRegion::left_ray(endpoint, closed);
    }
    case IntervalShape::Lower: {
      const double endpoint = order_statistic(x, rc.m);
      const bool closed = (x.array() <= endpoint).count() >= rc.m;
      return PredictionRegion::right_ray(endpoint, closed);
    }
    case IntervalShape::Bounded: {
      if (!kappa.has_value() || *kappa == 0.0)
        throw std::invalid_argument("exact_unsupervised_interval: bounded shape needs nonzero kappa");
      const double k = *kappa;
      // (X_i - x)(X_i + x - kappa) >= 0  <=>  |x - kappa/2| <= |X_i - kappa/2|.
      const Eigen::VectorXd h = (x.array() - k / 2.0).abs();
      const double half_width = order_statistic(h, rc.n + 1 - rc.m);
      const double lower = k / 2.0 - half_width;
      const double upper = k / 2.0 + half_width;
      const auto member = [&](double y) {
        return (((x.array() - y) * (x.array() + y - k)) >= 0.0).count() >= rc.m;
      };
      return PredictionRegion::bounded(lower, upper, member(lower), member(upper));
    }
  }
  throw std::invalid_argument("exact_unsupervised_interval: unknown shape");
}

}  // namespace conformal
