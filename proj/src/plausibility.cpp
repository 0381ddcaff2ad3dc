#include "conformal/plausibility.hpp"

#include "conformal/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace conformal {

namespace {

void check_finite(double score, std::size_t index, const std::string& label) {
  if (!std::isfinite(score))
    throw std::domain_error("measure '" + label + "' produced a non-finite score at index " +
                            std::to_string(index));
}

}  // namespace

std::vector<double> nonconformity_scores(const Sample& sample, const CandidatePoint& candidate,
                                         const SupervisedMeasure& measure) {
  if (candidate.features.size() != sample.feature_dim)
    throw std::invalid_argument("candidate feature dimension does not match sample");
  if (!measure.eval) throw std::invalid_argument("measure '" + measure.label + "' is not supervised-capable");

  std::vector<LabeledPoint> augmented = sample.points;
  augmented.push_back(candidate);
  const std::span<const LabeledPoint> all(augmented);

  std::vector<double> scores(augmented.size());
  for (std::size_t i = 0; i < augmented.size(); ++i) {
    scores[i] = measure.eval(SupervisedBag(all, i), augmented[i]);
    check_finite(scores[i], i, measure.label);
  }
  return scores;
}

std::vector<double> nonconformity_scores(const std::vector<double>& values, double candidate,
                                         const UnsupervisedMeasure& measure) {
  if (values.empty()) throw std::invalid_argument("unsupervised sample must be non-empty");
  if (!measure.eval) throw std::invalid_argument("measure '" + measure.label + "' is not unsupervised-capable");

  std::vector<double> augmented = values;
  augmented.push_back(candidate);
  const std::span<const double> all(augmented);

  std::vector<double> scores(augmented.size());
  for (std::size_t i = 0; i < augmented.size(); ++i) {
    scores[i] = measure.eval(UnsupervisedBag(all, i), augmented[i]);
    check_finite(scores[i], i, measure.label);
  }
  return scores;
}

namespace {

PlausibilityValue count_rank(const std::vector<double>& scores) {
  const double mu_new = scores.back();
  long long k = 0;
  for (double mu : scores)
    if (mu >= mu_new) ++k;
  return PlausibilityValue{k, static_cast<long long>(scores.size())};
}

}  // namespace

PlausibilityValue plausibility(const Sample& sample, const CandidatePoint& candidate,
                               const SupervisedMeasure& measure) {
  return count_rank(nonconformity_scores(sample, candidate, measure));
}

PlausibilityValue plausibility_unsupervised(const std::vector<double>& values, double candidate,
                                            const UnsupervisedMeasure& measure) {
  return count_rank(nonconformity_scores(values, candidate, measure));
}

double threshold(long long n, double alpha) {
  if (n < 1) throw std::invalid_argument("threshold: n must be >= 1");
  if (alpha <= 0.0 || alpha >= 1.0) throw std::invalid_argument("threshold: alpha outside (0, 1)");
  return static_cast<double>(floor_index((n + 1) * alpha)) / static_cast<double>(n + 1);
}

}  // namespace conformal
