#ifndef CONFORMAL_TYPES_HPP
#define CONFORMAL_TYPES_HPP

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace conformal {

/// One observation z_i = (x_i, y_i): a feature vector and a real response.
struct LabeledPoint {
  Eigen::VectorXd features;
  double response = 0.0;
};

/// A provisional future observation (x_{n+1}, y). Structurally identical to
/// LabeledPoint; the response field holds the candidate y value under test.
using CandidatePoint = LabeledPoint;

/// An exchangeable bag of n labeled points with a common feature dimension.
/// The point order is incidental; every consumer must treat it as a multiset.
struct Sample {
  std::vector<LabeledPoint> points;
  Eigen::Index feature_dim = 0;

  std::size_t size() const { return points.size(); }
};

inline Sample make_sample(std::vector<LabeledPoint> points) {
  if (points.empty()) throw std::invalid_argument("sample must contain at least one point");
  const Eigen::Index p = points.front().features.size();
  for (const auto& pt : points) {
    if (pt.features.size() != p)
      throw std::invalid_argument("sample points disagree on feature dimension");
    if (!pt.features.allFinite() || !std::isfinite(pt.response))
      throw std::invalid_argument("sample contains a non-finite value");
  }
  return Sample{std::move(points), p};
}

/// Convenience for unsupervised data and p=0 samples.
inline Sample make_sample(const std::vector<double>& responses) {
  std::vector<LabeledPoint> pts;
  pts.reserve(responses.size());
  for (double y : responses) pts.push_back({Eigen::VectorXd(0), y});
  return make_sample(std::move(pts));
}

/// The exact rational output k/(n+1) of the conformal algorithm.
/// The self-comparison always counts, so k >= 1.
struct PlausibilityValue {
  long long count = 1;
  long long denominator = 2;

  double value() const { return static_cast<double>(count) / static_cast<double>(denominator); }
};

/// One maximal interval of the real line. Infinite endpoints are encoded by
/// the *_infinite flags; the corresponding bound value is then ignored.
struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  bool lower_closed = false;
  bool upper_closed = false;
  bool lower_infinite = false;
  bool upper_infinite = false;

  bool contains(double y) const {
    if (!lower_infinite) {
      if (y < lower || (y == lower && !lower_closed)) return false;
    }
    if (!upper_infinite) {
      if (y > upper || (y == upper && !upper_closed)) return false;
    }
    return true;
  }

  double length() const {
    if (lower_infinite || upper_infinite) return std::numeric_limits<double>::infinity();
    return upper - lower;
  }
};

/// A conformal prediction region: the full line, a one-sided ray, a bounded
/// interval, or a finite union of disjoint intervals.
class PredictionRegion {
 public:
  enum class Kind { FullLine, LeftRay, RightRay, Bounded, Union };

  static PredictionRegion full_line() {
    PredictionRegion r;
    r.kind_ = Kind::FullLine;
    r.intervals_.push_back(Interval{0, 0, false, false, true, true});
    return r;
  }

  static PredictionRegion left_ray(double upper, bool upper_closed) {
    PredictionRegion r;
    r.kind_ = Kind::LeftRay;
    r.intervals_.push_back(Interval{0, upper, false, upper_closed, true, false});
    return r;
  }

  static PredictionRegion right_ray(double lower, bool lower_closed) {
    PredictionRegion r;
    r.kind_ = Kind::RightRay;
    r.intervals_.push_back(Interval{lower, 0, lower_closed, false, false, true});
    return r;
  }

  static PredictionRegion bounded(double lower, double upper, bool lower_closed,
                                  bool upper_closed) {
    if (!(lower <= upper)) throw std::invalid_argument("bounded region requires lower <= upper");
    PredictionRegion r;
    r.kind_ = Kind::Bounded;
    r.intervals_.push_back(Interval{lower, upper, lower_closed, upper_closed, false, false});
    return r;
  }

  static PredictionRegion union_of(std::vector<Interval> parts) {
    if (parts.empty()) throw std::invalid_argument("union region requires at least one interval");
    if (parts.size() == 1) {
      const Interval& iv = parts.front();
      if (iv.lower_infinite && iv.upper_infinite) return full_line();
      if (iv.lower_infinite) return left_ray(iv.upper, iv.upper_closed);
      if (iv.upper_infinite) return right_ray(iv.lower, iv.lower_closed);
      return bounded(iv.lower, iv.upper, iv.lower_closed, iv.upper_closed);
    }
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
      if (parts[i].upper_infinite || parts[i + 1].lower_infinite ||
          parts[i].upper > parts[i + 1].lower)
        throw std::invalid_argument("union intervals must be sorted and disjoint");
    }
    PredictionRegion r;
    r.kind_ = Kind::Union;
    r.intervals_ = std::move(parts);
    return r;
  }

  Kind kind() const { return kind_; }
  const std::vector<Interval>& intervals() const { return intervals_; }

  bool contains(double y) const {
    if (kind_ == Kind::FullLine) return true;
    for (const auto& iv : intervals_)
      if (iv.contains(y)) return true;
    return false;
  }

  /// Total length; infinite for rays and the full line.
  double length() const {
    double total = 0.0;
    for (const auto& iv : intervals_) total += iv.length();
    return total;
  }

  std::string kind_name() const {
    switch (kind_) {
      case Kind::FullLine: return "full_line";
      case Kind::LeftRay: return "left_ray";
      case Kind::RightRay: return "right_ray";
      case Kind::Bounded: return "bounded";
      case Kind::Union: return "union";
    }
    return "unknown";
  }

 private:
  Kind kind_ = Kind::FullLine;
  std::vector<Interval> intervals_;
};

enum class IntervalShape { Upper, Lower, Bounded };

inline std::string shape_name(IntervalShape s) {
  switch (s) {
    case IntervalShape::Upper: return "upper";
    case IntervalShape::Lower: return "lower";
    case IntervalShape::Bounded: return "bounded";
  }
  return "unknown";
}

}  // namespace conformal

#endif  // CONFORMAL_TYPES_HPP
