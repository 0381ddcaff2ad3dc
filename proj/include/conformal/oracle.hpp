#ifndef CONFORMAL_ORACLE_HPP
#define CONFORMAL_ORACLE_HPP

#include "conformal/plausibility.hpp"
#include "conformal/types.hpp"

#include <functional>
#include <optional>

namespace conformal {

/// Controls for the brute-force region scan. When no window is given, it is
/// derived from the observed responses: [min - 10 r, max + 10 r] with
/// r = max(range, 1).
struct ScanSpec {
  std::optional<double> window_lo;
  std::optional<double> window_hi;
  int grid_points = 4096;
  double bisect_tol = 1e-9;
};

/// Ground-truth region determined by scanning the plausibility function.
/// A run of member points that reaches a window edge is reported as a ray;
/// the touched_* flags record that contact so a caller expecting a bounded
/// region can widen the window and rerun.
struct OracleResult {
  PredictionRegion region = PredictionRegion::full_line();
  bool touched_lower_edge = false;
  bool touched_upper_edge = false;
  double window_lo = 0.0;
  double window_hi = 0.0;
};

/// Region scan for an arbitrary membership predicate y -> (pl(y) > alpha).
OracleResult scan_region(const std::function<bool(double)>& member, double window_lo,
                         double window_hi, int grid_points, double bisect_tol);

OracleResult region_oracle(const Sample& sample, const Eigen::VectorXd& features_new,
                           const SupervisedMeasure& measure, double alpha,
                           const ScanSpec& scan = {});

OracleResult region_oracle_unsupervised(const std::vector<double>& values,
                                        const UnsupervisedMeasure& measure, double alpha,
                                        const ScanSpec& scan = {});

}  // namespace conformal

#endif  // CONFORMAL_ORACLE_HPP
