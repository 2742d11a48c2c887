#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace mfk {

// Tolerances and limits shared by every integration routine.
struct QuadratureConfig {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_subdivisions = 2000;
  double tail_cutoff_factor = 10.0;  // semi-infinite truncation margin, must exceed 1
  double singular_order_cap = 0.95;  // largest admissible endpoint exponent, in [0,1)

  void validate() const {
    if (!(abs_tol >= 0.0) || !(rel_tol >= 0.0))
      throw std::invalid_argument("QuadratureConfig: tolerances must be nonnegative");
    if (abs_tol == 0.0 && rel_tol == 0.0)
      throw std::invalid_argument("QuadratureConfig: abs_tol and rel_tol cannot both be zero");
    if (max_subdivisions < 1)
      throw std::invalid_argument("QuadratureConfig: max_subdivisions must be >= 1");
    if (!(tail_cutoff_factor > 1.0))
      throw std::invalid_argument("QuadratureConfig: tail_cutoff_factor must exceed 1");
    if (!(singular_order_cap >= 0.0 && singular_order_cap < 1.0))
      throw std::invalid_argument("QuadratureConfig: singular_order_cap must lie in [0,1)");
  }
};

struct IntegralResult {
  std::complex<double> value{0.0, 0.0};
  double error_estimate = 0.0;
  long evaluations = 0;
  bool converged = false;
};

// Decay description for integrate_semi_infinite.  The hint controls where the
// range is truncated and how the remainder beyond that point is bounded, so
// past the truncation point |f| must decay at least this fast.
struct DecayHint {
  enum class Kind { exponential, algebraic };
  Kind kind;
  double value;
  static DecayHint exponential(double rate) { return {Kind::exponential, rate}; }
  static DecayHint algebraic(double power) { return {Kind::algebraic, power}; }
};

enum class SingularEnd { left, right };

namespace detail {

// 15-point Kronrod abscissae with the embedded 7-point Gauss rule.
inline constexpr double kx15[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0};
inline constexpr double kw15[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double kw7[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class T>
struct wide;
template <>
struct wide<double> {
  using type = long double;
};
template <>
struct wide<std::complex<double>> {
  using type = std::complex<long double>;
};

inline double mag(double v) { return std::fabs(v); }
inline double mag(const std::complex<double>& v) { return std::abs(v); }
inline long double magw(long double v) { return std::fabs(v); }
inline long double magw(const std::complex<long double>& v) { return std::abs(v); }

inline double narrow_to(long double v, double) { return static_cast<double>(v); }
inline std::complex<double> narrow_to(const std::complex<long double>& v, std::complex<double>) {
  return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}
inline std::complex<double> as_complex(double v) { return {v, 0.0}; }
inline std::complex<double> as_complex(const std::complex<double>& v) { return v; }

template <class T>
struct PanelData {
  double a, b;
  T value;
  double err;
  std::int64_t seq;
};

// One Gauss-Kronrod pass over [a, b].  Node sums run in extended precision so
// panel roundoff stays near eps times the absolute integrand mass.
template <class T, class F>
PanelData<T> gk15(F& f, double a, double b, std::int64_t seq) {
  using W = typename wide<T>::type;
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const T fc = f(c);
  W resk = W(fc) * static_cast<long double>(kw15[7]);
  W resg = W(fc) * static_cast<long double>(kw7[3]);
  long double resabs = magw(W(fc)) * kw15[7];
  T fv[14];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kx15[j];
    fv[2 * j] = f(c - dx);
    fv[2 * j + 1] = f(c + dx);
    const W fsum = W(fv[2 * j]) + W(fv[2 * j + 1]);
    resk += fsum * static_cast<long double>(kw15[j]);
    resabs += (magw(W(fv[2 * j])) + magw(W(fv[2 * j + 1]))) * kw15[j];
    if (j & 1) resg += fsum * static_cast<long double>(kw7[j / 2]);
  }
  const W mean = resk * 0.5L;
  long double resasc = magw(W(fc) - mean) * kw15[7];
  for (int j = 0; j < 7; ++j)
    resasc += (magw(W(fv[2 * j]) - mean) + magw(W(fv[2 * j + 1]) - mean)) * kw15[j];
  resasc *= h;
  resabs *= h;
  double err = static_cast<double>(magw(resk - resg) * h);
  const double rasc = static_cast<double>(resasc);
  if (rasc != 0.0 && err != 0.0)
    err = rasc * std::min(1.0, std::pow(200.0 * err / rasc, 1.5));
  const double eps50 = 50.0 * std::numeric_limits<double>::epsilon();
  if (static_cast<double>(resabs) > std::numeric_limits<double>::min() / eps50)
    err = std::max(eps50 * static_cast<double>(resabs), err);
  if (!std::isfinite(err)) err = std::numeric_limits<double>::infinity();
  PanelData<T> p;
  p.a = a;
  p.b = b;
  p.value = narrow_to(resk * static_cast<long double>(h), T{});
  p.err = err;
  p.seq = seq;
  return p;
}

template <class T, class F>
IntegralResult run_adaptive(F& f, double a, double b, const QuadratureConfig& cfg) {
  cfg.validate();
  if (!(std::isfinite(a) && std::isfinite(b)))
    throw std::invalid_argument("integrate_adaptive: endpoints must be finite");
  IntegralResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  if (!(a < b)) throw std::invalid_argument("integrate_adaptive: requires a < b");

  using P = PanelData<T>;
  using W = typename wide<T>::type;
  auto worse = [](const P& x, const P& y) {
    if (x.err != y.err) return x.err < y.err;
    return x.seq > y.seq;  // earlier panel wins ties, keeps pop order deterministic
  };
  std::vector<P> heap;
  std::vector<P> settled;
  std::int64_t seq = 0;
  long evals = 0;

  P root = gk15<T>(f, a, b, seq++);
  evals += 15;
  double err_sum = root.err;
  W val_sum = W(root.value);
  heap.push_back(root);

  // Exact re-sum over every live panel.  The running err_sum picks up
  // cancellation noise at the magnitude of the coarsest panels, so it alone
  // must not authorize a stop the final certification would reject.
  auto exact_err = [&]() {
    long double e = 0.0L;
    for (const P& p : heap) e += p.err;
    for (const P& p : settled) e += p.err;
    return static_cast<double>(e);
  };

  int splits = 0;
  while (true) {
    const double scale = static_cast<double>(magw(val_sum));
    const double bound = std::max(cfg.abs_tol, cfg.rel_tol * scale);
    if (err_sum <= bound) {
      const double confirmed = exact_err();
      if (confirmed <= bound) break;
      err_sum = confirmed;  // drifted low; resync and keep refining
      continue;
    }
    if (splits >= cfg.max_subdivisions) break;
    if (heap.empty()) break;
    std::pop_heap(heap.begin(), heap.end(), worse);
    P worst = heap.back();
    if (!(worst.err > 0.0)) {
      std::push_heap(heap.begin(), heap.end(), worse);
      break;
    }
    heap.pop_back();
    const double m = 0.5 * (worst.a + worst.b);
    if (!(m > worst.a && m < worst.b)) {
      settled.push_back(worst);  // interval at machine resolution, cannot split
      continue;
    }
    const P left = gk15<T>(f, worst.a, m, seq++);
    const P right = gk15<T>(f, m, worst.b, seq++);
    evals += 30;
    ++splits;
    err_sum += left.err + right.err - worst.err;
    val_sum += W(left.value) + W(right.value) - W(worst.value);
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), worse);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), worse);
  }

  settled.insert(settled.end(), heap.begin(), heap.end());
  // Sum in interval order with an extended accumulator so the result does not
  // depend on the heap's history.
  std::sort(settled.begin(), settled.end(), [](const P& x, const P& y) { return x.a < y.a; });
  W total{};
  long double err_total = 0.0L;
  for (const P& p : settled) {
    total += W(p.value);
    err_total += p.err;
  }
  out.value = as_complex(narrow_to(total, T{}));
  out.error_estimate = static_cast<double>(err_total);
  out.evaluations = evals;
  out.converged =
      out.error_estimate <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(out.value)) &&
      std::isfinite(out.value.real()) && std::isfinite(out.value.imag());
  return out;
}

template <class F>
using integrand_result_t = std::remove_cvref_t<std::invoke_result_t<F&, double>>;

template <class F>
constexpr void check_integrand_type() {
  using R = integrand_result_t<F>;
  static_assert(std::is_same_v<R, double> || std::is_same_v<R, std::complex<double>>,
                "integrand must return double or std::complex<double>");
}

}  // namespace detail

template <class F>
IntegralResult integrate_adaptive(F&& f, double a, double b, const QuadratureConfig& cfg = {}) {
  detail::check_integrand_type<F>();
  return detail::run_adaptive<detail::integrand_result_t<F>>(f, a, b, cfg);
}

// Integral over [a, infinity).  The range is truncated where the hinted decay
// makes the remainder negligible against abs_tol; the remainder bound is
// folded into the reported error estimate.
template <class F>
IntegralResult integrate_semi_infinite(F&& f, double a, DecayHint hint, const QuadratureConfig& cfg = {}) {
  detail::check_integrand_type<F>();
  cfg.validate();
  if (!std::isfinite(a)) throw std::invalid_argument("integrate_semi_infinite: lower limit must be finite");

  long extra_evals = 0;
  double tail_bound = 0.0;

  if (hint.kind == DecayHint::Kind::exponential) {
    const double r = hint.value;
    if (!(r > 0.0))
      throw std::invalid_argument("integrate_semi_infinite: exponential decay rate must be positive");
    const double L = 1.0 / r;
    double b = a + std::max(30.0 * L, cfg.tail_cutoff_factor * L);
    for (int ext = 0;; ++ext) {
      double env = 0.0;
      for (int j = 0; j < 5; ++j) env = std::max(env, detail::mag(f(b - 0.05 * L * j)));
      extra_evals += 5;
      tail_bound = env * L;
      if (!(tail_bound > cfg.abs_tol / 10.0) || ext >= 60) break;
      b += std::max(10.0 * L, 0.5 * (b - a));
    }
    IntegralResult res = integrate_adaptive(f, a, b, cfg);
    const bool finite_ok = res.converged;
    res.error_estimate += tail_bound;
    res.evaluations += extra_evals;
    // Certified piecewise: the finite part met its own tolerance and the
    // truncation remainder is below tolerance on its own.
    res.converged = finite_ok &&
                    tail_bound <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(res.value));
    return res;
  }

  const double p = hint.value;
  if (!(p > 1.0))
    throw std::invalid_argument("integrate_semi_infinite: algebraic decay needs power > 1");
  const double c = std::max(a + 1.0, 1.0);
  double b = std::max(4.0 * c, 16.0);
  for (;;) {
    double sup = 0.0;
    for (int j = 0; j < 8; ++j) {
      const double x = b * std::pow(0.5, j / 7.0);  // 8 samples spread over [b/2, b]
      sup = std::max(sup, detail::mag(f(x)) * std::pow(x, p));
    }
    extra_evals += 8;
    tail_bound = sup * std::pow(b, 1.0 - p) / (p - 1.0);
    if (!std::isfinite(tail_bound)) break;
    if (!(tail_bound > cfg.abs_tol / 10.0) || b >= 1e290) break;
    b *= 4.0;
  }
  QuadratureConfig half = cfg;
  half.abs_tol = 0.5 * cfg.abs_tol;
  IntegralResult head = integrate_adaptive(f, a, c, half);
  auto logsub = [&f](double u) {
    const double x = std::exp(u);
    return f(x) * x;
  };
  IntegralResult rest = integrate_adaptive(logsub, std::log(c), std::log(b), half);
  IntegralResult out;
  out.value = head.value + rest.value;
  out.error_estimate = head.error_estimate + rest.error_estimate + tail_bound;
  out.evaluations = head.evaluations + rest.evaluations + extra_evals;
  // Convergence is certified piecewise: the halves may cancel, which would make
  // a whole-value relative test fail even though each piece met its tolerance.
  out.converged = std::isfinite(out.value.real()) && std::isfinite(out.value.imag()) &&
                  head.converged && rest.converged &&
                  tail_bound <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(out.value));
  return out;
}

// Integral of g * d^{-exponent} over [a, b], where d is the distance to the
// singular endpoint.  Substituting d = s^(1/(1-exponent)) removes the
// singularity exactly.  The callback receives d, not the coordinate, at full
// relative precision; recovering d from the coordinate by subtraction would
// quantize it to multiples of eps * |endpoint| and any oscillatory factor of d
// would then inherit that noise.  The coordinate, where needed for smooth
// factors, is endpoint -/+ d.
template <class F>
IntegralResult integrate_endpoint_singular(F&& g, double a, double b, double exponent,
                                           SingularEnd end, const QuadratureConfig& cfg = {}) {
  detail::check_integrand_type<F>();
  cfg.validate();
  if (!(std::isfinite(a) && std::isfinite(b) && a < b))
    throw std::invalid_argument("integrate_endpoint_singular: requires finite a < b");
  if (!(exponent >= 0.0))
    throw std::invalid_argument("integrate_endpoint_singular: exponent must be >= 0");
  if (!(exponent < 1.0))
    throw std::invalid_argument("integrate_endpoint_singular: exponent >= 1 diverges");
  if (exponent > cfg.singular_order_cap)
    throw std::invalid_argument("integrate_endpoint_singular: exponent exceeds singular_order_cap");
  (void)end;  // the substituted integral has the same form from either end

  if (exponent == 0.0) return integrate_adaptive(g, 0.0, b - a, cfg);
  const double m = 1.0 / (1.0 - exponent);
  const double S = std::pow(b - a, 1.0 - exponent);
  QuadratureConfig inner = cfg;
  inner.abs_tol = cfg.abs_tol / m;
  auto h = [&g, m](double s) { return g(std::pow(s, m)); };
  IntegralResult res = detail::run_adaptive<detail::integrand_result_t<F>>(h, 0.0, S, inner);
  res.value *= m;
  res.error_estimate *= m;
  res.converged = std::isfinite(res.value.real()) && std::isfinite(res.value.imag()) &&
                  res.error_estimate <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(res.value));
  return res;
}

}  // namespace mfk
