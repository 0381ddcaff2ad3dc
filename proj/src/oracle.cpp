#include "conformal/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace conformal {

namespace {

std::pair<double, double> default_window(const std::vector<double>& responses,
                                         const ScanSpec& scan) {
  double lo = *std::min_element(responses.begin(), responses.end());
  double hi = *std::max_element(responses.begin(), responses.end());
  double range = std::max(hi - lo, 1.0);
  double wlo = scan.window_lo.value_or(lo - 10.0 * range);
  double whi = scan.window_hi.value_or(hi + 10.0 * range);
  if (!(wlo < whi)) throw std::invalid_argument("region_oracle: empty scan window");
  return {wlo, whi};
}

// Refine the boundary between a member point and a non-member point.
double refine_boundary(const std::function<bool(double)>& member, double inside, double outside,
                       double tol) {
  while (std::fabs(outside - inside) > tol) {
    const double mid = 0.5 * (inside + outside);
    if (mid == inside || mid == outside) break;
    if (member(mid))
      inside = mid;
    else
      outside = mid;
  }
  return 0.5 * (inside + outside);
}

}  // namespace

OracleResult scan_region(const std::function<bool(double)>& member, double window_lo,
                         double window_hi, int grid_points, double bisect_tol) {
  if (grid_points < 2) throw std::invalid_argument("scan_region: need at least 2 grid points");

  std::vector<double> grid(grid_points);
  std::vector<char> in(grid_points);
  for (int i = 0; i < grid_points; ++i) {
    grid[i] = window_lo + (window_hi - window_lo) * i / (grid_points - 1);
    in[i] = member(grid[i]) ? 1 : 0;
  }

  OracleResult out;
  out.window_lo = window_lo;
  out.window_hi = window_hi;

  if (std::all_of(in.begin(), in.end(), [](char c) { return c; })) {
    out.region = PredictionRegion::full_line();
    out.touched_lower_edge = out.touched_upper_edge = true;
    return out;
  }

  std::vector<Interval> parts;
  int i = 0;
  while (i < grid_points) {
    if (!in[i]) {
      ++i;
      continue;
    }
    int j = i;
    while (j + 1 < grid_points && in[j + 1]) ++j;

    Interval iv;
    if (i == 0) {
      iv.lower_infinite = true;
      out.touched_lower_edge = true;
    } else {
      iv.lower = refine_boundary(member, grid[i], grid[i - 1], bisect_tol);
      iv.lower_closed = member(iv.lower);
    }
    if (j == grid_points - 1) {
      iv.upper_infinite = true;
      out.touched_upper_edge = true;
    } else {
      iv.upper = refine_boundary(member, grid[j], grid[j + 1], bisect_tol);
      iv.upper_closed = member(iv.upper);
    }
    parts.push_back(iv);
    i = j + 1;
  }

  if (parts.empty())
    throw std::runtime_error("scan_region: no member points in the scan window");

  out.region = PredictionRegion::union_of(std::move(parts));
  return out;
}

OracleResult region_oracle(const Sample& sample, const Eigen::VectorXd& features_new,
                           const SupervisedMeasure& measure, double alpha, const ScanSpec& scan) {
  if (features_new.size() != sample.feature_dim)
    throw std::invalid_argument("region_oracle: feature dimension mismatch");
  if (alpha <= 0.0 || alpha >= 1.0) throw std::invalid_argument("region_oracle: alpha outside (0, 1)");

  std::vector<double> responses;
  responses.reserve(sample.size());
  for (const auto& pt : sample.points) responses.push_back(pt.response);
  auto [wlo, whi] = default_window(responses, scan);

  auto member = [&](double y) {
    CandidatePoint cand{features_new, y};
    return plausibility(sample, cand, measure).value() > alpha;
  };
  return scan_region(member, wlo, whi, scan.grid_points, scan.bisect_tol);
}

OracleResult region_oracle_unsupervised(const std::vector<double>& values,
                                        const UnsupervisedMeasure& measure, double alpha,
                                        const ScanSpec& scan) {
  if (values.empty()) throw std::invalid_argument("region_oracle: empty sample");
  if (alpha <= 0.0 || alpha >= 1.0) throw std::invalid_argument("region_oracle: alpha outside (0, 1)");

  auto [wlo, whi] = default_window(values, scan);
  auto member = [&](double x) {
    return plausibility_unsupervised(values, x, measure).value() > alpha;
  };
  return scan_region(member, wlo, whi, scan.grid_points, scan.bisect_tol);
}

}  // namespace conformal
