#ifndef BARO_INEQUALITIES_H_
#define BARO_INEQUALITIES_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "baro/rng.h"

namespace baro {

// Pr(|sum Y - mu| >= tau) for s draws without replacement from U, against
// 2 exp(-tau^2 / (4 mu + tau)).
struct TailCheck {
  double empirical = 0.0;
  double bound = 0.0;
  // Binomial standard error of the estimate at the bound (bound clipped to 1).
  double sigma = 0.0;
  double mu = 0.0;
  bool ok = true;  // empirical <= bound + 3 sigma
};

// Requires values in [0, 1], 1 <= s <= |U|, tau >= 0, trials >= 1.
TailCheck CheckWoReplacementTail(std::span<const double> u, int64_t s,
                                 double tau, int64_t trials, Rng& rng);

// sum a b p >= (sum a p)(sum b p) / sum p for non-increasing a, b and p >= 0
// with positive sum; 1e-12 relative slack. Throws InvalidParameter when the
// preconditions fail.
bool CheckChebyshevSum(std::span<const double> a, std::span<const double> b,
                       std::span<const double> p);

// Exhaustive comparison over S = {0, ..., n - 1}:
//   lhs = max over x of the mean of f over ordered m-tuples of distinct
//         elements of S \ {x},
//   rhs = (1 + m / (n - m))^m times the mean of f over all n^m tuples.
struct SamplingComparison {
  double lhs = 0.0;
  double rhs = 0.0;
  double factor = 0.0;
  bool ok = true;  // lhs <= rhs (1e-12 relative slack)
};

using TupleFunction = std::function<double(std::span<const int>)>;

// Requires 1 <= m < n and n <= 7, m <= 3; f must be nonnegative.
SamplingComparison CheckSamplingComparison(int n, int m,
                                           const TupleFunction& f);

struct MomentCheck {
  bool hypothesis_met = false;  // 2 <= m <= n p
  double exact = 0.0;           // E (sum X)^m for independent Bernoulli(p)
  double monte_carlo = 0.0;
  double monte_carlo_se = 0.0;
  double bound = 0.0;  // (2 e^2 n p)^m
  bool ok = true;      // exact <= bound and monte_carlo <= bound + 3 se
};

MomentCheck CheckMomentBound(int64_t n, double p, int m, int64_t trials,
                             Rng& rng);

// Exact E (Binomial(n, p))^m.
double BinomialMoment(int64_t n, double p, int m);

struct PsiIntegralCheck {
  bool hypothesis_met = false;  // m <= ln(k) / 4 and k >= 80
  double integral = 0.0;
  double error_estimate = 0.0;
  double bound = 0.0;        // 1 + 500^m / k
  double lower_sanity = 0.0;  // 1 - 2 / k
  bool ok = true;             // lower_sanity <= integral <= bound
};

// Integral over [0, inf)^m of psi(max_i x_i - 1/k), reduced to
// int_0^inf psi(z - 1/k) m z^(m-1) dz. Extending the domain past n only
// increases the value, so this dominates every horizon. Throws
// NumericFailure when the quadrature error exceeds 1e-8.
PsiIntegralCheck CheckPsiIntegral(double k, int m);

}  // namespace baro

#endif  // BARO_INEQUALITIES_H_
