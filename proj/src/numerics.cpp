#include "conformal/numerics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace conformal {

long long floor_index(double x) {
  double f = std::floor(x);
  if (x - f > 1.0 - 1e-9) f += 1.0;
  return static_cast<long long>(f);
}

namespace {

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kFpMin = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (x < 0.0 || x > 1.0) throw std::domain_error("incomplete_beta: x outside [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double incomplete_gamma_p(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::domain_error("incomplete_gamma_p: invalid arguments");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) {
    // Series representation.
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  // Continued fraction for Q(a, x).
  constexpr double kFpMin = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kFpMin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = b + an / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return 1.0 - std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double prob) {
  if (prob <= 0.0 || prob >= 1.0) throw std::domain_error("normal_quantile: prob outside (0, 1)");
  return bisect_increasing([](double x) { return normal_cdf(x); }, -40.0, 40.0, prob, 1e-12);
}

double student_t_cdf(long long dof, double t) {
  if (dof < 1) throw std::domain_error("student_t_cdf: dof must be >= 1");
  const double nu = static_cast<double>(dof);
  // y = t^2 / (nu + t^2) keeps full precision near t = 0, where the
  // complementary argument nu / (nu + t^2) would round to exactly 1.
  const double y = t * t / (nu + t * t);
  const double half_body = 0.5 * incomplete_beta(0.5, nu / 2.0, y);
  return t >= 0.0 ? 0.5 + half_body : 0.5 - half_body;
}

double t_quantile(long long dof, double upper_tail) {
  if (dof < 1) throw std::domain_error("t_quantile: dof must be >= 1");
  if (upper_tail <= 0.0 || upper_tail >= 1.0)
    throw std::domain_error("t_quantile: upper_tail outside (0, 1)");
  const double target = 1.0 - upper_tail;
  double hi = 2.0;
  while (student_t_cdf(dof, hi) < target && hi < 1e12) hi *= 2.0;
  return bisect_increasing([dof](double t) { return student_t_cdf(dof, t); }, -hi, hi, target,
                           1e-10);
}

double chi_square_cdf(long long dof, double x) {
  if (dof < 1) throw std::domain_error("chi_square_cdf: dof must be >= 1");
  if (x <= 0.0) return 0.0;
  return incomplete_gamma_p(static_cast<double>(dof) / 2.0, x / 2.0);
}

double chi_square_quantile(long long dof, double prob) {
  if (prob <= 0.0 || prob >= 1.0) throw std::domain_error("chi_square_quantile: prob outside (0, 1)");
  double hi = 2.0 * dof + 10.0;
  while (chi_square_cdf(dof, hi) < prob) hi *= 2.0;
  return bisect_increasing([dof](double x) { return chi_square_cdf(dof, x); }, 0.0, hi, prob,
                           1e-10);
}

double bisect_increasing(const std::function<double(double)>& f, double lo, double hi,
                         double target, double tol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo > target || fhi < target)
    throw std::invalid_argument("bisect_increasing: target not bracketed");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (f(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

double simpson(const std::function<double(double)>& f, double lo, double hi, double flo,
               double fmid, double fhi, double whole, double tol, int depth) {
  const double mid = 0.5 * (lo + hi);
  const double lmid = 0.5 * (lo + mid);
  const double rmid = 0.5 * (mid + hi);
  const double flmid = f(lmid);
  const double frmid = f(rmid);
  const double left = (mid - lo) / 6.0 * (flo + 4.0 * flmid + fmid);
  const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frmid + fhi);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson(f, lo, mid, flo, flmid, fmid, left, tol / 2.0, depth - 1) +
         simpson(f, mid, hi, fmid, frmid, fhi, right, tol / 2.0, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double lo, double hi, double tol) {
  const double mid = 0.5 * (lo + hi);
  const double flo = f(lo);
  const double fmid = f(mid);
  const double fhi = f(hi);
  const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
  return simpson(f, lo, hi, flo, fmid, fhi, whole, tol, 50);
}

namespace {

std::uint64_t splitmix_step(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

SplitMix64::SplitMix64(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed;
  const std::uint64_t a = splitmix_step(s);
  s = stream ^ 0xda3e39cb94b95bdbULL;
  const std::uint64_t b = splitmix_step(s);
  state_ = a ^ (b + 0x9e3779b97f4a7c15ULL);
}

std::uint64_t SplitMix64::next_u64() { return splitmix_step(state_); }

double SplitMix64::next_uniform() {
  return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double SplitMix64::next_uniform(double lo, double hi) {
  return lo + (hi - lo) * next_uniform();
}

double SplitMix64::next_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = next_uniform();
  const double u2 = next_uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

double SplitMix64::next_normal(double mean, double stddev) {
  return mean + stddev * next_normal();
}

}  // namespace conformal
