#ifndef CONFORMAL_EXACT_HPP
#define CONFORMAL_EXACT_HPP

#include "conformal/types.hpp"

#include <optional>

namespace conformal {

/// Order-statistic indices used by the closed-form intervals.
/// m = floor((n+1) alpha); the region is the whole line when m <= 1.
struct RankConstants {
  long long n = 0;
  long long m = 0;
  long long r1 = 0;
  long long r2 = 0;
  long long r3 = 0;

  bool trivial() const { return m <= 1; }
};

RankConstants rank_constants(long long n, double alpha);

/// Returns the full line when floor((n+1) alpha) <= 1, otherwise nothing.
std::optional<PredictionRegion> trivial_region_guard(long long n, double alpha);

/// a_i = sum_j (x_{n+1,j} - x_{ij}) + y_i for each sample point.
Eigen::VectorXd shift_scores(const Sample& sample, const Eigen::VectorXd& features_new);

/// Per-point quantities of the bounded construction. Every candidate interval
/// (a_i, b_i) is centered at -eta/2 with half-width s_i.
struct BoundedScores {
  Eigen::VectorXd c;
  Eigen::VectorXd d;
  Eigen::VectorXd s;
  Eigen::VectorXd a;
  Eigen::VectorXd b;
};

BoundedScores bounded_scores(const Sample& sample, const Eigen::VectorXd& features_new,
                             double eta);

/// Smallest eta for which every radicand eta^2/4 + eta c_i + d_i is nonnegative.
double min_eta(const Sample& sample, const Eigen::VectorXd& features_new);

/// Operational default: max_i 2(sqrt(max{0, c_i^2 - d_i} + 1) - c_i), which
/// strictly exceeds min_eta and keeps every radicand positive.
double default_eta(const Sample& sample, const Eigen::VectorXd& features_new);

/// Closed-form conformal intervals for the supervised polynomial measure.
/// Endpoint indices come from the membership-count rule (#comparisons >= m
/// under strict pl > alpha), with the oracle as arbiter; boundary closedness
/// is set by direct membership evaluation at the endpoint.
PredictionRegion exact_upper_interval(const Sample& sample, const Eigen::VectorXd& features_new,
                                      double alpha);
PredictionRegion exact_lower_interval(const Sample& sample, const Eigen::VectorXd& features_new,
                                      double alpha);
PredictionRegion exact_bounded_interval(const Sample& sample, const Eigen::VectorXd& features_new,
                                        double alpha, double eta);

/// Bounded interval whose endpoints are drawn by rank from the separately
/// sorted per-point endpoint lists: lower = a_(r1), upper = b_(r3), both
/// ascending. This is a subset of the exact membership region (which has
/// half-width s_((n+1-m)) on both sides); it is kept because the reference
/// coverage tables were produced with this construction, and the coverage
/// study reproduces them with it.
PredictionRegion ranked_endpoint_bounded_interval(const Sample& sample,
                                                  const Eigen::VectorXd& features_new,
                                                  double alpha, double eta);

PredictionRegion exact_supervised_interval(const Sample& sample,
                                           const Eigen::VectorXd& features_new, double alpha,
                                           IntervalShape shape,
                                           std::optional<double> eta = std::nullopt);

/// Closed-form conformal intervals for the unsupervised polynomial measure.
/// kappa is required and nonzero for the bounded shape.
PredictionRegion exact_unsupervised_interval(const std::vector<double>& values, double alpha,
                                             IntervalShape shape,
                                             std::optional<double> kappa = std::nullopt);

}  // namespace conformal

#endif  // CONFORMAL_EXACT_HPP
