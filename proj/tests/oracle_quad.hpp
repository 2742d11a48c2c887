#pragma once

// Test-side reference implementations, deliberately independent of the library
// under test: a doubly exponential quadrature in long double, a Spouge gamma,
// and ascending series for K0.  Slow and simple on purpose.

#include <array>
#include <cmath>
#include <complex>

namespace testoracle {

inline constexpr long double kPiL = 3.141592653589793238462643383279503L;

// Integrates f over (a, b).  f receives (x, x - a, b - x); both distances are
// produced without cancellation so endpoint-singular factors can be evaluated
// from them.  Handles integrable endpoint singularities of order below 1.
template <class R, class F>
R tanh_sinh(F&& f, long double a, long double b, int max_level = 13, long double rel_tol = 1e-19L) {
  const long double half_pi = 0.5L * kPiL;
  const long double c = 0.5L * (a + b), h2 = 0.5L * (b - a);
  const long double u_max = 7.5L;

  auto node_pair = [&](long double u, R& acc) -> bool {
    const long double esh = half_pi * std::sinh(u);
    const long double e2 = std::exp(-2.0L * esh);
    const long double one_minus_t = 2.0L * e2 / (1.0L + e2);
    const long double t = 1.0L - one_minus_t;
    const long double w = half_pi * std::cosh(u) * (4.0L * e2 / ((1.0L + e2) * (1.0L + e2)));
    const long double db = h2 * one_minus_t;
    const long double da = h2 * (1.0L + t);
    if (db <= 0.0L || w <= 0.0L) return false;
    acc += (R(f(c + h2 * t, da, db)) + R(f(c - h2 * t, db, da))) * w;
    return true;
  };

  R sum = R(f(c, h2, h2)) * half_pi;  // u = 0 node, weight (pi/2)
  for (int k = 1; k <= static_cast<int>(u_max); ++k)
    if (!node_pair(static_cast<long double>(k), sum)) break;
  long double h = 1.0L;
  R prev = sum * h;
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5L;
    R add{};
    for (int k = 1; k * h <= u_max; k += 2)
      if (!node_pair(k * h, add)) break;
    sum += add;
    const R cur = sum * h;
    const long double diff = std::abs(cur - prev);
    prev = cur;
    if (level >= 5 && diff <= rel_tol * (std::abs(cur) + 1e-300L)) break;
  }
  return prev * h2;
}

// cosh(a) - cosh(t) without cancellation near t = a.
inline long double cosh_diff(long double a, long double t) {
  return 2.0L * std::sinh(0.5L * (a + t)) * std::sinh(0.5L * (a - t));
}

// Spouge's gamma approximation, a = 24 terms in long double.
inline std::complex<long double> spouge_gamma(std::complex<long double> z) {
  constexpr int a = 24;
  static const std::array<long double, a> coef = [] {
    std::array<long double, a> c{};
    c[0] = std::sqrt(2.0L * kPiL);
    long double fact = 1.0L;
    for (int k = 1; k < a; ++k) {
      const long double ak = static_cast<long double>(a - k);
      c[k] = std::exp((k - 0.5L) * std::log(ak) + ak - std::log(fact));
      if ((k - 1) & 1) c[k] = -c[k];
      fact *= k;
    }
    return c;
  }();
  if (z.real() < 0.5L) {
    const std::complex<long double> s = std::sin(kPiL * z);
    return kPiL / (s * spouge_gamma(1.0L - z));
  }
  z -= 1.0L;
  std::complex<long double> acc = coef[0];
  for (int k = 1; k < a; ++k) acc += coef[k] / (z + static_cast<long double>(k));
  const std::complex<long double> za = z + static_cast<long double>(a);
  return std::pow(za, z + 0.5L) * std::exp(-za) * acc;
}

// Ascending series for K0, accurate for y up to ~15.
inline long double bessel_k0_series(long double y) {
  const long double euler = 0.5772156649015328606065120900824024L;
  const long double q = 0.25L * y * y;
  long double term = 1.0L, i0 = 1.0L, ksum = 0.0L, hk = 0.0L;
  for (int k = 1; k < 400; ++k) {
    term *= q / (static_cast<long double>(k) * k);
    hk += 1.0L / k;
    i0 += term;
    ksum += term * hk;
    if (term < 1e-28L * i0) break;
  }
  return -(std::log(0.5L * y) + euler) * i0 + ksum;
}

}  // namespace testoracle
