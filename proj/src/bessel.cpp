#include "sinefield/bessel.hpp"

#include <cmath>
#include <cstdlib>
#include <vector>

#include "sinefield/errors.hpp"

namespace sf {

namespace {

constexpr double kMaxAbsX = 30.0;
constexpr double kSeriesCut = 12.0;  // series cancellation stays below ~1e-13 here
constexpr int kMaxTerms = 200;

// Alternating series sum_m (-1)^m / (m! (m+l)!) (x/2)^(2m+l), accumulated in
// long double for headroom against cancellation.
double series_j(int order, double x) {
  const long double half = static_cast<long double>(x) / 2.0L;
  long double term = 1.0L;
  for (int k = 1; k <= order; ++k) term *= half / k;  // (x/2)^l / l!
  long double sum = term;
  const long double q = half * half;
  for (int m = 1; m < kMaxTerms; ++m) {
    term *= -q / (static_cast<long double>(m) * (m + order));
    sum += term;
    if (std::abs(static_cast<double>(term)) < 1e-16) break;
  }
  return static_cast<double>(sum);
}

// Miller's backward recurrence: run J_{k-1} = (2k/x) J_k - J_{k+1} downward
// from a seed order high enough that J_seed(x) ~ 0, then normalize with
// J_0 + 2 sum_{k>0 even} J_k = 1.
double miller_j(int order, double x) {
  const double ax = std::abs(x);
  const int start = order + 50 + static_cast<int>(ax);
  long double jpp = 0.0L;   // J_{k+1}
  long double jp = 1e-30L;  // J_k, with k = start (arbitrary seed scale)
  long double norm = (start % 2 == 0) ? 2.0L * jp : 0.0L;
  long double result = (order == start) ? jp : 0.0L;
  for (int k = start; k >= 1; --k) {
    const long double jm = (2.0L * k / ax) * jp - jpp;  // J_{k-1}
    jpp = jp;
    jp = jm;
    const int idx = k - 1;
    if (idx == order) result = jp;
    if (idx > 0 && idx % 2 == 0) norm += 2.0L * jp;
    if (std::abs(static_cast<double>(jp)) > 1e250) {  // rescale to avoid overflow
      jp *= 1e-250L;
      jpp *= 1e-250L;
      norm *= 1e-250L;
      result *= 1e-250L;
    }
  }
  norm += jp;  // jp holds J_0 after the walk
  double v = static_cast<double>(result / norm);
  if (x < 0.0 && order % 2 == 1) v = -v;  // J_l(-x) = (-1)^l J_l(x)
  return v;
}

}  // namespace

double bessel_j(int order, double x) {
  if (order < 0) throw InvalidArgument("bessel_j: order must be >= 0");
  if (!(std::abs(x) <= kMaxAbsX))
    throw InvalidArgument("bessel_j: |x| exceeds supported range 30");
  if (x == 0.0) return order == 0 ? 1.0 : 0.0;
  if (std::abs(x) <= kSeriesCut) return series_j(order, x);
  return miller_j(order, x);
}

}  // namespace sf
