#include "baro/inequalities.h"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numeric>

#include "baro/core.h"
#include "baro/error.h"

namespace baro {

TailCheck CheckWoReplacementTail(std::span<const double> u, int64_t s,
                                 double tau, int64_t trials, Rng& rng) {
  if (s < 1 || s > static_cast<int64_t>(u.size())) {
    throw InvalidParameter("need 1 <= s <= |U|");
  }
  if (!(tau >= 0.0) || trials < 1) {
    throw InvalidParameter("need tau >= 0 and trials >= 1");
  }
  for (double x : u) {
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidParameter("U must lie in [0, 1]");
  }
  TailCheck check;
  const double mean =
      std::accumulate(u.begin(), u.end(), 0.0) / static_cast<double>(u.size());
  check.mu = static_cast<double>(s) * mean;
  check.bound = 2.0 * std::exp(-tau * tau / (4.0 * check.mu + tau));
  if (tau == 0.0) check.bound = 2.0;

  std::vector<double> pool(u.begin(), u.end());
  int64_t hits = 0;
  for (int64_t trial = 0; trial < trials; ++trial) {
    double sum = 0.0;
    // Partial Fisher-Yates: the first s slots become the sample.
    for (int64_t i = 0; i < s; ++i) {
      const size_t j = i + rng.Below(pool.size() - i);
      std::swap(pool[i], pool[j]);
      sum += pool[i];
    }
    if (std::abs(sum - check.mu) >= tau) ++hits;
  }
  check.empirical = static_cast<double>(hits) / static_cast<double>(trials);
  const double p = std::min(1.0, check.bound);
  check.sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  check.ok = check.empirical <= check.bound + 3.0 * check.sigma;
  return check;
}

bool CheckChebyshevSum(std::span<const double> a, std::span<const double> b,
                       std::span<const double> p) {
  if (a.size() != b.size() || a.size() != p.size() || a.empty()) {
    throw InvalidParameter("a, b and p need the same positive length");
  }
  double sp = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    if (i > 0 && (a[i] > a[i - 1] || b[i] > b[i - 1])) {
      throw InvalidParameter("a and b must be non-increasing");
    }
    if (!(p[i] >= 0.0)) throw InvalidParameter("p must be nonnegative");
    sp += p[i];
  }
  if (!(sp > 0.0)) throw InvalidParameter("p must have a positive sum");
  double sab = 0.0, sa = 0.0, sb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    sab += a[i] * b[i] * p[i];
    sa += a[i] * p[i];
    sb += b[i] * p[i];
  }
  const double rhs = sa * sb / sp;
  return sab >= rhs - 1e-12 * std::max({1.0, std::abs(sab), std::abs(rhs)});
}

namespace {

// Calls fn on every tuple in {0..n-1}^m (odometer order).
template <typename Fn>
void ForEachTuple(int n, int m, Fn&& fn) {
  std::vector<int> tuple(m, 0);
  while (true) {
    fn(std::span<const int>(tuple));
    int i = m - 1;
    while (i >= 0 && ++tuple[i] == n) tuple[i--] = 0;
    if (i < 0) return;
  }
}

}  // namespace

SamplingComparison CheckSamplingComparison(int n, int m,
                                           const TupleFunction& f) {
  if (m < 1 || m >= n) throw InvalidParameter("need 1 <= m < |S|");
  if (n > 7 || m > 3) {
    throw InvalidParameter("exhaustive enumeration needs |S| <= 7, m <= 3");
  }
  double with_sum = 0.0;
  int64_t with_count = 0;
  std::vector<double> without_sum(n, 0.0);
  std::vector<int64_t> without_count(n, 0);
  ForEachTuple(n, m, [&](std::span<const int> tuple) {
    const double v = f(tuple);
    if (v < 0.0) throw InvalidParameter("f must be nonnegative");
    with_sum += v;
    ++with_count;
    std::vector<bool> used(n, false);
    bool distinct = true;
    for (int x : tuple) {
      if (used[x]) distinct = false;
      used[x] = true;
    }
    if (!distinct) return;
    for (int x = 0; x < n; ++x) {
      if (used[x]) continue;
      without_sum[x] += v;
      ++without_count[x];
    }
  });
  SamplingComparison result;
  for (int x = 0; x < n; ++x) {
    result.lhs = std::max(result.lhs, without_sum[x] / without_count[x]);
  }
  result.factor = std::pow(1.0 + static_cast<double>(m) / (n - m), m);
  result.rhs = result.factor * with_sum / static_cast<double>(with_count);
  result.ok = result.lhs <= result.rhs + 1e-12 * std::max(1.0, result.rhs);
  return result;
}

double BinomialMoment(int64_t n, double p, int m) {
  if (n < 0 || !(p >= 0.0 && p <= 1.0) || m < 0) {
    throw InvalidParameter("need n >= 0, p in [0, 1], m >= 0");
  }
  // Accumulate the pmf through its ratio recurrence.
  if (p == 0.0) return m == 0 ? 1.0 : 0.0;
  if (p == 1.0) return std::pow(static_cast<double>(n), m);
  double log_pmf = n * std::log1p(-p);
  double moment = 0.0;
  for (int64_t j = 0; j <= n; ++j) {
    if (j > 0) {
      log_pmf += std::log(static_cast<double>(n - j + 1) / j) +
                 std::log(p) - std::log1p(-p);
    }
    moment += std::exp(log_pmf) * std::pow(static_cast<double>(j), m);
  }
  return moment;
}

MomentCheck CheckMomentBound(int64_t n, double p, int m, int64_t trials,
                             Rng& rng) {
  if (trials < 1) throw InvalidParameter("trials must be positive");
  MomentCheck check;
  check.hypothesis_met = m >= 2 && m <= n * p;
  check.exact = BinomialMoment(n, p, m);
  check.bound = std::pow(2.0 * std::exp(2.0) * n * p, m);
  double sum = 0.0, sum_sq = 0.0;
  for (int64_t trial = 0; trial < trials; ++trial) {
    int64_t count = 0;
    for (int64_t i = 0; i < n; ++i) count += rng.Bernoulli(p) ? 1 : 0;
    const double v = std::pow(static_cast<double>(count), m);
    sum += v;
    sum_sq += v * v;
  }
  const double t = static_cast<double>(trials);
  check.monte_carlo = sum / t;
  const double var = std::max(0.0, sum_sq / t - check.monte_carlo * check.monte_carlo);
  check.monte_carlo_se = std::sqrt(var / t);
  check.ok = check.exact <= check.bound * (1.0 + 1e-12) &&
             check.monte_carlo <= check.bound + 3.0 * check.monte_carlo_se;
  return check;
}

PsiIntegralCheck CheckPsiIntegral(double k, int m) {
  if (!(k >= 3.0) || m < 1) throw InvalidParameter("need k >= 3 and m >= 1");
  using boost::math::quadrature::exp_sinh;
  using boost::math::quadrature::gauss_kronrod;
  const double shift = 1.0 / k;
  auto density = [m](double z) {
    return m * std::pow(z, m - 1);
  };

  // psi(z - 1/k) is 1 below 1 + 1/k, 2/k up to 50 + 1/k, then the
  // exponential tail; integrate each smooth piece separately.
  const double a = 1.0 + shift;
  const double b = 50.0 + shift;
  double err1 = 0.0, err2 = 0.0, err3 = 0.0;
  const double part1 = gauss_kronrod<double, 61>::integrate(
      [&](double z) { return density(z); }, 0.0, a, 15, 1e-14, &err1);
  const double part2 = gauss_kronrod<double, 61>::integrate(
      [&](double z) { return (2.0 / k) * density(z); }, a, b, 15, 1e-14,
      &err2);
  exp_sinh<double> tail_integrator;
  const double part3 = tail_integrator.integrate(
      [&](double z) { return Psi(z - shift, k) * density(z); }, b,
      std::numeric_limits<double>::infinity(), 1e-12, &err3);

  PsiIntegralCheck check;
  check.hypothesis_met = k >= 80.0 && m <= std::log(k) / 4.0;
  check.integral = part1 + part2 + part3;
  // Scaled so that the estimate is conservative whether boost reports
  // absolute or relative errors.
  check.error_estimate = err1 * std::max(1.0, part1) +
                         err2 * std::max(1.0, part2) +
                         err3 * std::max(1.0, part3);
  if (!(check.error_estimate <= 1e-8)) {
    throw NumericFailure("psi integral quadrature did not converge");
  }
  check.bound = 1.0 + std::pow(500.0, m) / k;
  check.lower_sanity = 1.0 - 2.0 / k;
  check.ok = check.lower_sanity <= check.integral &&
             check.integral <= check.bound;
  return check;
}

}  // namespace baro
