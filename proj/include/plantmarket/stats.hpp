#pragma once

// Sample moments, Welch's two-sample t statistic and the two-sided
// Student-t tail probability.

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>

#include "plantmarket/errors.hpp"

namespace plantmarket::stats {

inline double mean(std::span<const double> xs) {
  if (xs.empty()) throw ConfigError("mean: empty sample");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

/// Unbiased sample variance (n - 1 denominator).
inline double variance(std::span<const double> xs) {
  if (xs.size() < 2) throw ConfigError("variance: need at least two observations");
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / static_cast<double>(xs.size() - 1);
}

inline double stddev(std::span<const double> xs) { return xs.size() < 2 ? 0.0 : std::sqrt(variance(xs)); }

struct WelchT {
  double t = 0.0;
  double df = 0.0;
};

/// Welch's t for mean(a) - mean(b) with Welch-Satterthwaite degrees of
/// freedom. Throws when either sample has fewer than two values or both
/// variances are zero.
inline WelchT welch_t(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw ConfigError("welch_t: each sample needs at least two observations");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double va = variance(a) / na;
  const double vb = variance(b) / nb;
  const double se2 = va + vb;
  if (!(se2 > 0.0)) throw ConfigError("welch_t: both samples have zero variance");
  WelchT r;
  r.t = (mean(a) - mean(b)) / std::sqrt(se2);
  r.df = se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
  return r;
}

namespace detail {

// Continued fraction for the incomplete beta function (modified Lentz).
inline double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 10000;
  constexpr double kEpsilon = 1e-10;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEpsilon) return h;
  }
  throw std::runtime_error("incomplete beta: continued fraction did not converge");
}

}  // namespace detail

/// Regularized incomplete beta I_x(a, b).
inline double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw ConfigError("incomplete_beta: a and b must be > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw ConfigError("incomplete_beta: x must be in [0,1]");
  if (x == 0.0 || x == 1.0) return x;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  // the continued fraction converges fast for x < (a+1)/(a+b+2); use symmetry otherwise
  if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * detail::beta_continued_fraction(b, a, 1.0 - x) / b;
}

/// Two-sided p-value P(|T| >= |t|) for Student's t with `df` degrees of
/// freedom.
inline double t_tail(double t, double df) {
  if (!(df > 0.0)) throw ConfigError("t_tail: degrees of freedom must be > 0");
  if (std::isinf(t)) return 0.0;
  if (std::isnan(t)) throw ConfigError("t_tail: t is NaN");
  const double x = df / (df + t * t);
  const double p = incomplete_beta(0.5 * df, 0.5, x);
  return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p);
}

}  // namespace plantmarket::stats
