#ifndef CONFORMAL_PLAUSIBILITY_HPP
#define CONFORMAL_PLAUSIBILITY_HPP

#include "conformal/types.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace conformal {

/// View of an array with one element skipped: the leave-one-out bag handed to
/// a nonconformity measure. Elements keep their relative order, but a measure
/// must be bag-symmetric, so the order carries no meaning.
template <typename T>
class BagView {
 public:
  BagView(std::span<const T> base, std::size_t skip) : base_(base), skip_(skip) {}

  std::size_t size() const { return base_.size() - (skip_ < base_.size() ? 1 : 0); }
  const T& operator[](std::size_t i) const { return base_[i + (i >= skip_ ? 1 : 0)]; }

 private:
  std::span<const T> base_;
  std::size_t skip_;
};

using SupervisedBag = BagView<LabeledPoint>;
using UnsupervisedBag = BagView<double>;

/// A deterministic, bag-symmetric nonconformity measure M(B, z) for the
/// supervised setting.
struct SupervisedMeasure {
  std::string label;
  std::function<double(const SupervisedBag&, const LabeledPoint&)> eval;
};

/// A deterministic, bag-symmetric nonconformity measure M(B, x) for the
/// unsupervised setting.
struct UnsupervisedMeasure {
  std::string label;
  std::function<double(const UnsupervisedBag&, double)> eval;
};

/// Leave-one-out nonconformity scores mu_1, ..., mu_{n+1} for the augmented
/// bag sample + candidate; the last entry is the candidate's own score.
/// Throws std::domain_error if the measure produces a non-finite score and
/// std::invalid_argument on a feature-dimension mismatch.
std::vector<double> nonconformity_scores(const Sample& sample, const CandidatePoint& candidate,
                                         const SupervisedMeasure& measure);

std::vector<double> nonconformity_scores(const std::vector<double>& values, double candidate,
                                         const UnsupervisedMeasure& measure);

/// The conformal plausibility k/(n+1) with k = #{i : mu_i >= mu_{n+1}}.
PlausibilityValue plausibility(const Sample& sample, const CandidatePoint& candidate,
                               const SupervisedMeasure& measure);

PlausibilityValue plausibility_unsupervised(const std::vector<double>& values, double candidate,
                                            const UnsupervisedMeasure& measure);

/// The validity threshold t_n(alpha) = floor((n+1) alpha) / (n+1).
double threshold(long long n, double alpha);

}  // namespace conformal

#endif  // CONFORMAL_PLAUSIBILITY_HPP
