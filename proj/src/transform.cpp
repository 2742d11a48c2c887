#include "mfk/transform.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "mfk/gamma.hpp"

namespace mfk {
namespace {

constexpr double kPi = std::numbers::pi;

using cplx = std::complex<double>;

cplx pow_positive(double base, cplx e) {
  // base > 0; principal branch
  return std::exp(e * std::log(base));
}

void require_finite(const cplx& v, const char* what) {
  if (!(std::isfinite(v.real()) && std::isfinite(v.imag()))) throw std::invalid_argument(what);
}

// Trigonometric integral of the represented function, without the
// (t^2 - 1)^(-mu/2) weight: integral over (-pi, pi) of
// psi(u) sinh(u) (t + cosh u)^(mu - 3/2) du.
cplx f_spec_integral(const FunctionSpec& spec, double t, const QuadratureConfig& cfg) {
  const cplx e = spec.mu.value - 1.5;
  const bool real_mu = spec.mu.value.imag() == 0.0;
  auto f = [&spec, t, e, real_mu](double u) -> cplx {
    const double base = std::cosh(u) + t;  // >= 2 on the whole range
    const cplx p = real_mu ? cplx(std::pow(base, e.real()), 0.0) : pow_positive(base, e);
    return spec.psi(u) * std::sinh(u) * p;
  };
  const IntegralResult res = integrate_adaptive(f, -kPi, kPi, cfg);
  if (!res.converged)
    throw convergence_error("boundary-data integral: quadrature did not converge");
  return res.value;
}

// Projection of F onto the omega = pi incomplete kernel, without the
// inversion prefactor.  The kernel's (x-1)^(-mu/2) factor is routed through
// the singular-endpoint engine; F is evaluated as given.
IntegralResult project_incomplete(const std::function<cplx(double)>& F, double f_tail_power,
                                  const MuParameter& mu, int n, const TransformConfig& tc) {
  const IncompleteKernel ik(mu, n);
  const QuadratureConfig kq = tc.kernel_quad;
  auto g = [&ik, &F, kq](double d) -> cplx {
    const double x = argument_from_distance(d);
    return ik.regular_part(x, kq) * F(x);
  };
  return integrate_from_one(g, 0.5 * mu.value, DecayHint::algebraic(1.5 + f_tail_power), tc.quad,
                            tc.x_max);
}

}  // namespace

double CoefficientSequence::l1_norm() const {
  double s = 0.0;
  for (const auto& v : values) s += std::abs(v);
  return s;
}

void CoefficientSequence::validate() const {
  for (const auto& v : values) require_finite(v, "coefficients must be finite");
  if (!(tail_l1 >= 0.0) || !std::isfinite(tail_l1))
    throw std::invalid_argument("tail_l1 must be finite and >= 0");
}

void SampledFunction::validate() const {
  if (grid.size() != values.size())
    throw std::invalid_argument("sample grid and values must have equal length");
  if (grid.empty()) throw std::invalid_argument("sample grid must be nonempty");
  if (!(grid.front() > 1.0)) throw std::invalid_argument("sample grid must lie in (1, infinity)");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw std::invalid_argument("sample grid must be strictly increasing");
  for (const auto& v : values) require_finite(v, "sample values must be finite");
  if (!std::isfinite(tail_exponent) || !(tail_exponent >= 0.0))
    throw std::invalid_argument("tail_exponent must be finite and >= 0");
}

std::complex<double> SampledFunction::operator()(double x) const {
  if (x <= grid.front()) return values.front();
  if (x >= grid.back()) return values.back() * std::pow(x / grid.back(), -tail_exponent);
  const auto it = std::upper_bound(grid.begin(), grid.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - grid.begin());
  const double w = (x - grid[j - 1]) / (grid[j] - grid[j - 1]);
  return values[j - 1] + (values[j] - values[j - 1]) * w;
}

int FunctionSpec::degree() const {
  for (int k = static_cast<int>(sine_coeffs.size()); k >= 1; --k)
    if (sine_coeffs[k - 1] != cplx(0.0, 0.0)) return k;
  return 0;
}

std::complex<double> FunctionSpec::psi(double u) const {
  cplx s = constant;
  for (std::size_t k = 0; k < sine_coeffs.size(); ++k)
    s += sine_coeffs[k] * std::sin(static_cast<double>(k + 1) * u);
  for (std::size_t k = 0; k < cosine_coeffs.size(); ++k)
    s += cosine_coeffs[k] * std::cos(static_cast<double>(k + 1) * u);
  return s;
}

void TransformConfig::validate() const {
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  if (!(x_max == 0.0 || x_max > 1.0))
    throw std::invalid_argument("x_max must be 0 (adaptive) or > 1");
  quad.validate();
  kernel_quad.validate();
}

std::complex<double> inversion_prefactor(const MuParameter& mu, int n) {
  if (n < 1) throw std::domain_error("coefficient index requires n >= 1");
  return (static_cast<double>(n) / kPi) * std::sinh(kPi * n) * gamma_pair(n, mu.value);
}

IntegralResult integrate_from_one(const std::function<std::complex<double>(double)>& g,
                                  std::complex<double> sigma, DecayHint tail,
                                  const QuadratureConfig& cfg, double x_max) {
  cfg.validate();
  if (!(x_max == 0.0 || x_max > 1.0))
    throw std::invalid_argument("integrate_from_one: x_max must be 0 (adaptive) or > 1");
  const bool capped = x_max > 1.0;
  const double head_end = capped ? std::min(x_max, 2.0) : 2.0;
  const double head_exp = std::max(sigma.real(), 0.0);
  const cplx rho = sigma - cplx(head_exp, 0.0);  // power of d the callback keeps
  auto head_g = [&g, rho](double d) -> cplx {
    if (rho == cplx(0.0, 0.0)) return g(d);
    if (!(d > 0.0)) return rho.real() < 0.0 ? cplx(0.0, 0.0) : g(d);
    return g(d) * std::exp(-rho * std::log(d));
  };
  QuadratureConfig half = cfg;
  half.abs_tol = 0.5 * cfg.abs_tol;
  IntegralResult res =
      integrate_endpoint_singular(head_g, 1.0, head_end, head_exp, SingularEnd::left, half);
  if (!capped || x_max > 2.0) {
    auto rest_f = [&g, sigma](double x) -> cplx {
      const double d = x - 1.0;  // d >= 1 here, no cancellation concern
      if (sigma == cplx(0.0, 0.0)) return g(d);
      return g(d) * std::exp(-sigma * std::log(d));
    };
    const IntegralResult rest = capped ? integrate_adaptive(rest_f, 2.0, x_max, half)
                                       : integrate_semi_infinite(rest_f, 2.0, tail, half);
    res.value += rest.value;
    res.error_estimate += rest.error_estimate;
    res.evaluations += rest.evaluations;
    // certified piecewise: the halves may cancel
    res.converged = res.converged && rest.converged;
  }
  return res;
}

SeriesResult forward_series(const CoefficientSequence& a, const MuParameter& mu, double x,
                            const TransformConfig& tc) {
  tc.validate();
  a.validate();
  if (!(x > 1.0)) throw std::domain_error("series argument must satisfy x > 1");
  cplx sum = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    if (a.values[i] == cplx(0.0, 0.0)) continue;  // keep unit sequences exact
    const double tau = KernelDegree::discrete(static_cast<int>(i) + 1).tau;
    sum += a.values[i] * conical_kernel(mu, tau, x, tc.route, tc.kernel_quad);
  }
  double tail = 0.0;
  if (a.tail_l1 > 0.0) {
    // tau = 0 envelope; the Mellin-Barnes route has no tau = 0 evaluation, so
    // fall back to automatic selection for the bound
    const KernelRoute r =
        tc.route == KernelRoute::mellin_barnes ? KernelRoute::automatic : tc.route;
    tail = std::abs(conical_kernel(mu, KernelDegree::continuous(0.0).tau, x, r, tc.kernel_quad)) *
           a.tail_l1;
  }
  return {sum, tail};
}

CoefficientResult inverse_coefficients(const std::function<std::complex<double>(double)>& F,
                                       double f_tail_power, const MuParameter& mu, int n,
                                       const TransformConfig& tc) {
  tc.validate();
  if (n < 1) throw std::domain_error("coefficient index requires n >= 1");
  if (!(f_tail_power >= 0.0) || !std::isfinite(f_tail_power))
    throw std::domain_error("f_tail_power must be finite and >= 0");
  const IntegralResult res = project_incomplete(F, f_tail_power, mu, n, tc);
  const cplx pref = inversion_prefactor(mu, n);
  return {pref * res.value, std::abs(pref) * res.error_estimate, res.converged};
}

CoefficientResult inverse_coefficients(const SampledFunction& F, const MuParameter& mu, int n,
                                       const TransformConfig& tc) {
  F.validate();
  auto eval = [&F](double x) { return F(x); };
  return inverse_coefficients(eval, F.tail_exponent, mu, n, tc);
}

std::vector<CoefficientResult> inverse_coefficients_batch(
    const std::function<std::complex<double>(double)>& F, double f_tail_power,
    const MuParameter& mu, int n_count, const TransformConfig& tc, Exec exec) {
  tc.validate();
  if (n_count < 0) throw std::domain_error("n_count must be >= 0");
  std::vector<CoefficientResult> out(static_cast<std::size_t>(n_count));
  parallel_for(
      out.size(),
      [&](std::size_t i) {
        out[i] = inverse_coefficients(F, f_tail_power, mu, static_cast<int>(i) + 1, tc);
      },
      exec);
  return out;
}

std::function<std::complex<double>(double)> dual_series(const CoefficientSequence& a,
                                                        const MuParameter& mu,
                                                        const TransformConfig& tc) {
  tc.validate();
  a.validate();
  struct Term {
    IncompleteKernel ik;
    cplx weight;
  };
  auto terms = std::make_shared<std::vector<Term>>();
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    if (a.values[i] == cplx(0.0, 0.0)) continue;
    const int m = static_cast<int>(i) + 1;
    terms->push_back({IncompleteKernel(mu, m), a.values[i] * gamma_pair(m, mu.value)});
  }
  const QuadratureConfig kq = tc.kernel_quad;
  return [terms, kq](double x) -> cplx {
    cplx s = 0.0;
    for (const auto& t : *terms) s += t.weight * t.ik(x, kq);
    return s;
  };
}

CoefficientResult dual_inverse_coefficients(const std::function<std::complex<double>(double)>& G,
                                            const MuParameter& mu, int n,
                                            const TransformConfig& tc) {
  tc.validate();
  mu.require_strict();
  if (n < 1) throw std::domain_error("coefficient index requires n >= 1");
  const double tau = KernelDegree::discrete(n).tau;
  const QuadratureConfig kq = tc.kernel_quad;
  const KernelRoute route = tc.route;
  auto g = [&G, mu, tau, route, kq](double d) -> cplx {
    const double x = argument_from_distance(d);
    return conical_kernel(mu, tau, x, route, kq) * G(x);
  };
  // the integrand's own endpoint behavior (order below 1 in the strict
  // regime) is resolved by refinement; no factor is stripped from a caller
  // evaluator
  const IntegralResult res =
      integrate_from_one(g, 0.0, DecayHint::algebraic(1.75 + 0.5 * mu.value.real()), tc.quad,
                         tc.x_max);
  const double pref = (static_cast<double>(n) / kPi) * std::sinh(kPi * n);
  return {pref * res.value, pref * res.error_estimate, res.converged};
}

CoefficientResult dual_inverse_coefficients(const CoefficientSequence& a, const MuParameter& mu,
                                            int n, const TransformConfig& tc) {
  tc.validate();
  mu.require_strict();
  a.validate();
  if (n < 1) throw std::domain_error("coefficient index requires n >= 1");
  // structured inner series: the common (x-1)^(-mu/2) factor of the
  // incomplete kernels is stripped, and so is the outer kernel's matching
  // branch factor, giving the endpoint engine the combined order mu
  struct Term {
    IncompleteKernel ik;
    cplx weight;
  };
  std::vector<Term> terms;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    if (a.values[i] == cplx(0.0, 0.0)) continue;
    const int m = static_cast<int>(i) + 1;
    terms.push_back({IncompleteKernel(mu, m), a.values[i] * gamma_pair(m, mu.value)});
  }
  const double tau = KernelDegree::discrete(n).tau;
  const QuadratureConfig kq = tc.kernel_quad;
  const KernelRoute route = tc.route;
  auto g = [&terms, mu, tau, route, kq](double d) -> cplx {
    const double x = argument_from_distance(d);
    cplx s = 0.0;
    for (const auto& t : terms) s += t.weight * t.ik.regular_part(x, kq);
    return conical_regular_part(mu, tau, x, d, route, kq) * s;
  };
  const IntegralResult res =
      integrate_from_one(g, mu.value, DecayHint::algebraic(1.75 + 0.5 * mu.value.real()),
                         tc.quad, tc.x_max);
  const double pref = (static_cast<double>(n) / kPi) * std::sinh(kPi * n);
  return {pref * res.value, pref * res.error_estimate, res.converged};
}

std::complex<double> evaluate_f_from_spec(const FunctionSpec& spec, double t,
                                          const TransformConfig& tc) {
  tc.validate();
  if (!(t > 1.0)) throw std::domain_error("function argument must satisfy t > 1");
  const cplx mu = spec.mu.value;
  const double xsq = (t - 1.0) * (t + 1.0);
  const cplx weight = mu.imag() == 0.0 ? cplx(std::pow(xsq, -0.5 * mu.real()), 0.0)
                                       : pow_positive(xsq, -0.5 * mu);
  return weight * f_spec_integral(spec, t, tc.quad);
}

std::complex<double> coefficients_from_psi(const FunctionSpec& spec, int n) {
  if (n < 1) throw std::domain_error("harmonic index requires n >= 1");
  const cplx b = n <= static_cast<int>(spec.sine_coeffs.size()) ? spec.sine_coeffs[n - 1]
                                                                : cplx(0.0, 0.0);
  if (b == cplx(0.0, 0.0)) return 0.0;  // exact support
  const cplx gamma_post = complex_gamma(cplx(1.5, 0.0) - spec.mu.value);
  return std::sqrt(2.0 * kPi) * kPi * b / (std::sinh(kPi * n) * gamma_post);
}

IntegralResult project_spec_function(const FunctionSpec& spec, int n, const TransformConfig& tc) {
  tc.validate();
  if (n < 1) throw std::domain_error("harmonic index requires n >= 1");
  const MuParameter mu = spec.mu;
  const double tau = KernelDegree::discrete(n).tau;
  const QuadratureConfig kq = tc.kernel_quad;
  const KernelRoute route = tc.route;
  auto g = [&spec, mu, tau, route, kq](double d) -> cplx {
    const double x = argument_from_distance(d);
    // (x^2 - 1)^(-mu/2) split as d^(-mu/2) (2 + d)^(-mu/2); that d power and
    // the kernel's own branch factor go through the endpoint engine together
    return conical_regular_part(mu, tau, x, d, route, kq) *
           pow_positive(2.0 + d, -0.5 * mu.value) * f_spec_integral(spec, x, kq);
  };
  return integrate_from_one(g, mu.value, DecayHint::algebraic(1.75 + 0.5 * mu.value.real()),
                            tc.quad, tc.x_max);
}

std::complex<double> expand_function_incomplete(const FunctionSpec& spec, double x,
                                                const TransformConfig& tc) {
  tc.validate();
  if (!(x > 1.0)) throw std::domain_error("series argument must satisfy x > 1");
  const int top = spec.degree();
  if (tc.n_max < top)
    throw std::invalid_argument("n_max truncates the sine harmonics of the boundary data");
  cplx sum = 0.0;
  for (int n = 1; n <= top; ++n) {
    const cplx c = coefficients_from_psi(spec, n);
    if (c == cplx(0.0, 0.0)) continue;
    sum += inversion_prefactor(spec.mu, n) * IncompleteKernel(spec.mu, n)(x, tc.kernel_quad) * c;
  }
  return sum;
}

CompleteExpansion expand_complete_coefficients(const CoefficientSequence& a,
                                               const MuParameter& mu, const TransformConfig& tc,
                                               int n_count, Exec exec) {
  tc.validate();
  a.validate();
  mu.require_strict();
  if (n_count == 0) n_count = static_cast<int>(a.values.size());
  if (n_count < 1) throw std::domain_error("n_count must be >= 1");
  CompleteExpansion ce;
  const std::size_t count = static_cast<std::size_t>(n_count);
  ce.d.resize(count);
  ce.d_error.resize(count);
  ce.d_closed_form.resize(count);
  std::vector<char> ok(count, 1);
  const std::function<cplx(double)> F = [&a, mu, &tc](double x) {
    return forward_series(a, mu, x, tc).value;
  };
  // series images decay like the tau = 0 envelope, x^(-1/4 - Re mu / 2)
  const double ftp = std::max(0.0, 0.25 + 0.5 * mu.value.real());
  parallel_for(
      count,
      [&](std::size_t i) {
        const int n = static_cast<int>(i) + 1;
        const IntegralResult r = project_incomplete(F, ftp, mu, n, tc);
        ce.d[i] = r.value;
        ce.d_error[i] = r.error_estimate;
        ok[i] = r.converged ? 1 : 0;
        const cplx an = i < a.values.size() ? a.values[i] : cplx(0.0, 0.0);
        ce.d_closed_form[i] = an == cplx(0.0, 0.0) ? cplx(0.0, 0.0)
                                                   : an / inversion_prefactor(mu, n);
      },
      exec);
  for (const char c : ok) ce.converged = ce.converged && c != 0;
  return ce;
}

std::complex<double> evaluate_complete_expansion(const CompleteExpansion& ce,
                                                 const MuParameter& mu, double x,
                                                 const TransformConfig& tc) {
  tc.validate();
  mu.require_strict();
  if (!(x > 1.0)) throw std::domain_error("series argument must satisfy x > 1");
  cplx sum = 0.0;
  for (std::size_t i = 0; i < ce.d.size(); ++i) {
    if (ce.d[i] == cplx(0.0, 0.0)) continue;
    const int n = static_cast<int>(i) + 1;
    sum += inversion_prefactor(mu, n) *
           conical_kernel(mu, KernelDegree::discrete(n).tau, x, tc.route, tc.kernel_quad) * ce.d[i];
  }
  return sum;
}

}  // namespace mfk
