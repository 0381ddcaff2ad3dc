#include "conformal/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace conformal {

SupervisedMeasure polynomial_supervised(const PolynomialSupervisedParams& params) {
  if (!std::isfinite(params.beta1) || !std::isfinite(params.beta2) ||
      !std::isfinite(params.gamma) || !std::isfinite(params.eta))
    throw std::invalid_argument("polynomial_supervised: parameters must be finite");
  return SupervisedMeasure{
      "poly-sup",
      [p = params](const SupervisedBag& bag, const LabeledPoint& z) {
        double bag_sum = 0.0;
        for (std::size_t i = 0; i < bag.size(); ++i)
          bag_sum += bag[i].response - bag[i].features.sum();
        const double y = z.response;
        return (p.beta2 * y * y + p.beta1 * y) + p.gamma * (z.features.sum() + p.eta * bag_sum);
      }};
}

UnsupervisedMeasure polynomial_unsupervised(const PolynomialUnsupervisedParams& params) {
  if (!std::isfinite(params.lambda) || !std::isfinite(params.theta) || !std::isfinite(params.kappa))
    throw std::invalid_argument("polynomial_unsupervised: parameters must be finite");
  return UnsupervisedMeasure{
      "poly-unsup",
      [p = params](const UnsupervisedBag& bag, double x) {
        double bag_sum = 0.0;
        for (std::size_t i = 0; i < bag.size(); ++i) bag_sum += bag[i];
        return p.lambda * x * x + p.theta * x + p.kappa * bag_sum;
      }};
}

namespace {

double min_response_excluding(const Sample& sample, std::size_t skip) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < sample.size(); ++j)
    if (j != skip) m = std::min(m, sample.points[j].response);
  return m;
}

double min_excluding(const std::vector<double>& values, std::size_t skip) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < values.size(); ++j)
    if (j != skip) m = std::min(m, values[j]);
  return m;
}

// M(B, z) = (sum_bag x1 + x) + min{bag y} + y
SupervisedMeasure min_shift_measure(std::string label) {
  return SupervisedMeasure{
      std::move(label),
      [](const SupervisedBag& bag, const LabeledPoint& z) {
        double x_sum = z.features.sum();
        double y_min = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < bag.size(); ++i) {
          x_sum += bag[i].features.sum();
          y_min = std::min(y_min, bag[i].response);
        }
        // y terms first: structural score ties then stay bit-exact ties
        // whenever the shared x-sum is exact.
        return (y_min + z.response) + x_sum;
      }};
}

// Consolidated threshold for the min-based measure:
// mu_i >= mu_{n+1}  <=>  y <= Y_i + m_i - min{m_i, Y_i},
// where m_i is the minimum of the other observed responses.
bool min_shift_claim(double y_i, double m_i, double candidate) {
  return candidate <= y_i + m_i - std::min(m_i, y_i);
}

CatalogEntry make_ce1(const std::string& id) {
  CatalogEntry e;
  e.id = id;
  e.description = "min-based monotone measure violating the score-shift property";
  e.supervised = min_shift_measure(id);
  e.claim_supervised = [](const Sample& s, const CandidatePoint& cand, std::size_t i) {
    if (s.size() < 2) throw std::invalid_argument("ce1 claim needs n >= 2");
    return min_shift_claim(s.points[i].response, min_response_excluding(s, i), cand.response);
  };
  e.monotonicity = Monotonicity::Increasing;
  return e;
}

CatalogEntry make_ce1u(const std::string& id) {
  CatalogEntry e;
  e.id = id;
  e.description = "unsupervised min-based monotone measure";
  e.unsupervised = UnsupervisedMeasure{
      id,
      [](const UnsupervisedBag& bag, double x) {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < bag.size(); ++i) m = std::min(m, bag[i]);
        return m + x;
      }};
  e.claim_unsupervised = [](const std::vector<double>& v, double cand, std::size_t i) {
    if (v.size() < 2) throw std::invalid_argument("ce1u claim needs n >= 2");
    return min_shift_claim(v[i], min_excluding(v, i), cand);
  };
  e.monotonicity = Monotonicity::Increasing;
  return e;
}

}  // namespace

const std::vector<CatalogEntry>& counterexample_catalog() {
  static const std::vector<CatalogEntry> catalog = [] {
    std::vector<CatalogEntry> entries;

    entries.push_back(make_ce1("ce1"));

    {
      CatalogEntry e;
      e.id = "ce2";
      e.description = "non-monotone measure whose comparison reduces to Y_{n+1} <= Y_i";
      e.supervised = SupervisedMeasure{
          "ce2",
          [](const SupervisedBag& bag, const LabeledPoint& z) {
            double x_sum = z.features.sum();
            double y2_sum = 0.0;
            for (std::size_t i = 0; i < bag.size(); ++i) {
              x_sum += bag[i].features.sum();
              y2_sum += bag[i].response * bag[i].response;
            }
            return x_sum + y2_sum + z.response * z.response + z.response;
          }};
      e.claim_supervised = [](const Sample& s, const CandidatePoint& cand, std::size_t i) {
        return cand.response <= s.points[i].response;
      };
      e.monotonicity = Monotonicity::NonMonotone;
      entries.push_back(std::move(e));
    }

    {
      CatalogEntry e;
      e.id = "ce4";
      e.description = "monotone measure whose region splits into two rays";
      e.supervised = SupervisedMeasure{
          "ce4",
          [](const SupervisedBag& bag, const LabeledPoint& z) {
            double x_sum = z.features.sum();
            double y2_sum = 0.0;
            for (std::size_t i = 0; i < bag.size(); ++i) {
              x_sum += bag[i].features.sum();
              y2_sum += bag[i].response * bag[i].response;
            }
            return x_sum + y2_sum + z.response;
          }};
      e.claim_supervised = [](const Sample& s, const CandidatePoint& cand, std::size_t i) {
        const double yi = s.points[i].response;
        const double y = cand.response;
        return (y - yi) * (y + yi - 1.0) >= 0.0;
      };
      e.monotonicity = Monotonicity::Increasing;
      entries.push_back(std::move(e));
    }

    entries.push_back(make_ce1(
        "ce5"));  // same measure as ce1; listed separately for its one-sided-region claim

    {
      CatalogEntry e;
      e.id = "ce9";
      e.description = "monotone measure with no known closed-form comparison";
      e.supervised = SupervisedMeasure{
          "ce9",
          [](const SupervisedBag& bag, const LabeledPoint& z) {
            if (std::fabs(z.response) > 2.0)
              throw std::domain_error("ce9: |y| > 2 overflows e^(y^8); measure restricted");
            double x_sum = z.features.sum();
            for (std::size_t i = 0; i < bag.size(); ++i) {
              if (std::fabs(bag[i].response) > 2.0)
                throw std::domain_error("ce9: |y| > 2 overflows e^(y^8); measure restricted");
              x_sum += bag[i].features.sum();
            }
            const double t = std::max(0.0, z.response);
            return x_sum + std::exp(std::pow(t, 8.0)) + t;
          }};
      e.monotonicity = Monotonicity::Increasing;
      e.evaluation_only = true;
      entries.push_back(std::move(e));
    }

    entries.push_back(make_ce1u("ce1u"));

    {
      CatalogEntry e;
      e.id = "ce2u";
      e.description = "unsupervised non-monotone measure, comparison X_{n+1} <= X_i";
      e.unsupervised = UnsupervisedMeasure{
          "ce2u",
          [](const UnsupervisedBag& bag, double x) {
            double s = 0.0;
            for (std::size_t i = 0; i < bag.size(); ++i) s += bag[i] * bag[i];
            return s + x * x + x;
          }};
      e.claim_unsupervised = [](const std::vector<double>& v, double cand, std::size_t i) {
        return cand <= v[i];
      };
      e.monotonicity = Monotonicity::NonMonotone;
      entries.push_back(std::move(e));
    }

    {
      CatalogEntry e;
      e.id = "ce4u";
      e.description = "unsupervised monotone measure whose region splits into two rays";
      e.unsupervised = UnsupervisedMeasure{
          "ce4u",
          [](const UnsupervisedBag& bag, double x) {
            double s = 0.0;
            for (std::size_t i = 0; i < bag.size(); ++i) s += bag[i] * bag[i];
            return s + x;
          }};
      e.claim_unsupervised = [](const std::vector<double>& v, double cand, std::size_t i) {
        return (cand - v[i]) * (cand + v[i] - 1.0) >= 0.0;
      };
      e.monotonicity = Monotonicity::Increasing;
      entries.push_back(std::move(e));
    }

    entries.push_back(make_ce1u("ce5u"));

    return entries;
  }();
  return catalog;
}

const CatalogEntry& catalog_entry(const std::string& id) {
  for (const auto& e : counterexample_catalog())
    if (e.id == id) return e;
  throw std::invalid_argument("unknown catalog measure id: " + id);
}

}  // namespace conformal
