#include <cmath>
#include <numbers>

#include "degsynth/kernels.hpp"

namespace degsynth {

namespace {

double j1_series(double x) {
  // sum_m (-1)^m (x/2)^(2m+1) / (m! (m+1)!)
  const double half = 0.5 * x;
  const double half_sq = half * half;
  double term = half;
  double sum = term;
  for (int m = 1; m < 80; ++m) {
    term *= -half_sq / (static_cast<double>(m) * (m + 1));
    sum += term;
    if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
  }
  return sum;
}

double j1_hankel(double x) {
  // J1(x) ~ sqrt(2/(pi x)) (P cos chi - Q sin chi), chi = x - 3 pi / 4,
  // with the standard asymptotic series in 1/x for mu = 4 nu^2 = 4. The
  // series diverges, so summation stops at the smallest term.
  constexpr double mu = 4.0;
  double p = 0.0, q = 0.0;
  double coeff = 1.0;  // a_k(nu) / x^k
  double previous = HUGE_VAL;
  for (int k = 0; k < 60; ++k) {
    const double magnitude = std::fabs(coeff);
    if (magnitude > previous) break;
    previous = magnitude;
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      p += sign * coeff;
    } else {
      q += sign * coeff;
    }
    if (magnitude < 1e-18) break;
    const double odd = 2.0 * (k + 1) - 1.0;
    coeff *= (mu - odd * odd) / (8.0 * (k + 1) * x);
  }
  const double chi = x - 0.75 * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j1(double x) {
  // J1 is odd.
  if (x < 0.0) return -bessel_j1(-x);
  if (x < 12.0) return j1_series(x);
  return j1_hankel(x);
}

}  // namespace degsynth
