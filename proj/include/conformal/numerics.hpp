#ifndef CONFORMAL_NUMERICS_HPP
#define CONFORMAL_NUMERICS_HPP

#include <cstdint>
#include <functional>

namespace conformal {

/// Floor of x with a snap window for decimal alphas: values within 1e-9 of
/// the next integer are rounded up, so quantities like 10 * 0.3 floor to 3.
long long floor_index(double x);

/// Regularized incomplete beta function I_x(a, b).
double incomplete_beta(double a, double b, double x);

/// Regularized lower incomplete gamma function P(a, x).
double incomplete_gamma_p(double a, double x);

/// Standard normal CDF and its inverse (root-finding on erfc, |err| <= 1e-12).
double normal_cdf(double x);
double normal_quantile(double prob);

/// CDF of the central Student-t distribution with dof degrees of freedom.
double student_t_cdf(long long dof, double t);

/// The value q with P(T > q) = upper_tail under Student-t(dof).
/// Monotone bisection on the CDF, absolute tolerance 1e-10.
double t_quantile(long long dof, double upper_tail);

/// Chi-square CDF and quantile (prob is the lower-tail probability).
double chi_square_cdf(long long dof, double x);
double chi_square_quantile(long long dof, double prob);

/// Root of a monotone increasing function f on [lo, hi] with f(lo) <= target
/// <= f(hi), refined to absolute tolerance tol in x.
double bisect_increasing(const std::function<double(double)>& f, double lo, double hi,
                         double target, double tol);

/// Adaptive Simpson quadrature of f on [lo, hi] to absolute tolerance tol.
double integrate(const std::function<double(double)>& f, double lo, double hi, double tol);

/// SplitMix64: a tiny counter-style generator. Each (seed, stream) pair yields
/// an independent deterministic stream, so replications can run in any order.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  SplitMix64(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  /// Uniform draw in (0, 1].
  double next_uniform();
  /// Uniform draw on (lo, hi).
  double next_uniform(double lo, double hi);
  /// Standard normal via Box-Muller (pairs are cached).
  double next_normal();
  double next_normal(double mean, double stddev);

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace conformal

#endif  // CONFORMAL_NUMERICS_HPP
