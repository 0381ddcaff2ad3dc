#ifndef CONFORMAL_BASELINE_HPP
#define CONFORMAL_BASELINE_HPP

#include "conformal/types.hpp"

namespace conformal {

/// Ordinary least squares fit of y on the design [1 | X] (or X alone).
struct OlsFit {
  Eigen::VectorXd coefficients;
  double sigma_hat = 0.0;
  Eigen::MatrixXd gram_inverse;
  long long dof = 0;
  bool intercept = true;
};

/// Least squares via Householder QR. Throws std::invalid_argument when the
/// design is rank deficient or n <= number of fitted coefficients.
OlsFit ols_fit(const Sample& sample, bool intercept = true);

/// Student-t prediction interval at features_new. The bounded shape uses the
/// alpha/2 two-sided quantile; one-sided shapes put the whole tail mass alpha
/// on the relevant side.
PredictionRegion lm_interval(const OlsFit& fit, const Eigen::VectorXd& features_new, double alpha,
                             IntervalShape shape);

}  // namespace conformal

#endif  // CONFORMAL_BASELINE_HPP
