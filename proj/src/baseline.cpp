#include "conformal/baseline.hpp"

#include "conformal/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace conformal {

namespace {

Eigen::MatrixXd build_design(const Sample& sample, bool intercept) {
  const auto n = static_cast<Eigen::Index>(sample.size());
  const Eigen::Index p = sample.feature_dim;
  Eigen::MatrixXd design(n, p + (intercept ? 1 : 0));
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index col = 0;
    if (intercept) design(i, col++) = 1.0;
    design.row(i).segment(col, p) = sample.points[static_cast<std::size_t>(i)].features;
  }
  return design;
}

Eigen::VectorXd augment(const Eigen::VectorXd& features_new, bool intercept) {
  if (!intercept) return features_new;
  Eigen::VectorXd x(features_new.size() + 1);
  x[0] = 1.0;
  x.tail(features_new.size()) = features_new;
  return x;
}

}  // namespace

OlsFit ols_fit(const Sample& sample, bool intercept) {
  const Eigen::MatrixXd design = build_design(sample, intercept);
  const auto n = design.rows();
  const auto k = design.cols();
  if (n <= k) throw std::invalid_argument("ols_fit: need more observations than coefficients");

  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y[i] = sample.points[static_cast<std::size_t>(i)].response;

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < k) throw std::invalid_argument("ols_fit: rank-deficient design");

  OlsFit fit;
  fit.intercept = intercept;
  fit.coefficients = qr.solve(y);
  fit.dof = n - k;
  const Eigen::VectorXd residuals = y - design * fit.coefficients;
  fit.sigma_hat = std::sqrt(residuals.squaredNorm() / static_cast<double>(fit.dof));
  fit.gram_inverse =
      (design.transpose() * design).ldlt().solve(Eigen::MatrixXd::Identity(k, k));
  return fit;
}

PredictionRegion lm_interval(const OlsFit& fit, const Eigen::VectorXd& features_new, double alpha,
                             IntervalShape shape) {
  if (alpha <= 0.0 || alpha >= 1.0) throw std::invalid_argument("lm_interval: alpha outside (0, 1)");
  const Eigen::VectorXd x = augment(features_new, fit.intercept);
  if (x.size() != fit.coefficients.size())
    throw std::invalid_argument("lm_interval: feature dimension mismatch");

  const double center = x.dot(fit.coefficients);
  const double spread = std::sqrt(1.0 + x.dot(fit.gram_inverse * x)) * fit.sigma_hat;
  switch (shape) {
    case IntervalShape::Upper:
      return PredictionRegion::left_ray(center + t_quantile(fit.dof, alpha) * spread, false);
    case IntervalShape::Lower:
      return PredictionRegion::right_ray(center - t_quantile(fit.dof, alpha) * spread, false);
    case IntervalShape::Bounded: {
      const double half = t_quantile(fit.dof, alpha / 2.0) * spread;
      return PredictionRegion::bounded(center - half, center + half, false, false);
    }
  }
  throw std::invalid_argument("lm_interval: unknown shape");
}

}  // namespace conformal
