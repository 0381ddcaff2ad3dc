#ifndef CONFORMAL_MEASURES_HPP
#define CONFORMAL_MEASURES_HPP

#include "conformal/plausibility.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace conformal {

/// Coefficients of the supervised polynomial family
/// M(B, z) = (beta2 y^2 + beta1 y) + gamma [sum_j x_j + eta sum_i (y_i - sum_j x_ij)].
struct PolynomialSupervisedParams {
  double beta1 = 0.0;
  double beta2 = 0.0;
  double gamma = 0.0;
  double eta = 0.0;
};

/// Coefficients of the unsupervised polynomial family
/// M(B, x) = lambda x^2 + theta x + kappa sum_j x_j.
struct PolynomialUnsupervisedParams {
  double lambda = 0.0;
  double theta = 0.0;
  double kappa = 0.0;
};

SupervisedMeasure polynomial_supervised(const PolynomialSupervisedParams& params);
UnsupervisedMeasure polynomial_unsupervised(const PolynomialUnsupervisedParams& params);

enum class Monotonicity { Increasing, Decreasing, NonMonotone };

/// One counterexample measure together with its claimed score-comparison
/// predicate. Claims are stated over raw data, never over scores, so that the
/// claim tests remain independent oracles for mu_i >= mu_{n+1}.
struct CatalogEntry {
  std::string id;
  std::string description;
  std::optional<SupervisedMeasure> supervised;
  std::optional<UnsupervisedMeasure> unsupervised;
  /// Predicts mu_i >= mu_{n+1} for held-out index i (0-based, i < n).
  std::function<bool(const Sample&, const CandidatePoint&, std::size_t)> claim_supervised;
  std::function<bool(const std::vector<double>&, double, std::size_t)> claim_unsupervised;
  Monotonicity monotonicity = Monotonicity::Increasing;
  /// Entry exists to demonstrate impracticality; no closed form is attempted.
  bool evaluation_only = false;
};

/// Entries ce1, ce2, ce4, ce5 (alias of ce1), ce9 and the unsupervised twins
/// ce1u, ce2u, ce4u, ce5u.
const std::vector<CatalogEntry>& counterexample_catalog();

/// Lookup by id; throws std::invalid_argument for an unknown id.
const CatalogEntry& catalog_entry(const std::string& id);

}  // namespace conformal

#endif  // CONFORMAL_MEASURES_HPP
