#pragma once

// Discrete Mehler-Fock transform engine: series synthesis over conical
// kernels, coefficient recovery by semi-infinite projection onto the
// incomplete kernel, the dual expansion with the kernel roles swapped, and
// the two function-expansion routes (trigonometric data and coefficient
// data).

#include <complex>
#include <functional>
#include <vector>

#include "mfk/kernels.hpp"
#include "mfk/parallel.hpp"
#include "mfk/quadrature.hpp"

namespace mfk {

// Finite-support coefficient sequence a_1..a_N (index n >= 1).  tail_l1 is
// the caller-declared l1 mass beyond the stored support when the sequence was
// truncated from an infinite one; it feeds only the reported synthesis tail
// bound.
struct CoefficientSequence {
  std::vector<std::complex<double>> values;
  double tail_l1 = 0.0;

  double l1_norm() const;  // sum of |a_n| over the stored support
  void validate() const;   // throws std::invalid_argument
};

// Tabulated function on a strictly increasing grid in (1, infinity).  Linear
// interpolation inside the grid; beyond the last point the power tail
// values.back() * (x / grid.back())^(-tail_exponent); below the first point
// the first value is held constant.
struct SampledFunction {
  std::vector<double> grid;
  std::vector<std::complex<double>> values;
  double tail_exponent = 1.5;

  void validate() const;  // throws std::invalid_argument
  std::complex<double> operator()(double x) const;
};

// Trigonometric-polynomial boundary data psi(u) = constant
// + sum_k sine_coeffs[k-1] sin(ku) + sum_k cosine_coeffs[k-1] cos(ku).
// Such psi is 2 pi periodic and continuously differentiable by construction.
// Only the odd (sine) part contributes to the represented function.
struct FunctionSpec {
  std::vector<std::complex<double>> sine_coeffs;
  std::vector<std::complex<double>> cosine_coeffs;
  std::complex<double> constant = 0.0;
  MuParameter mu = MuParameter::broad(0.0);

  int degree() const;  // highest sine harmonic with a nonzero coefficient
  std::complex<double> psi(double u) const;
};

struct TransformConfig {
  int n_max = 20;       // truncation for expansion series
  double x_max = 0.0;   // 0 = adaptive truncation; otherwise > 1 forces a cutoff
  KernelRoute route = KernelRoute::automatic;
  QuadratureConfig quad{};                                  // outer integrals
  QuadratureConfig kernel_quad{1e-13, 1e-11, 2000, 10.0, 0.95};  // kernel evals

  void validate() const;  // throws std::invalid_argument
};

struct SeriesResult {
  std::complex<double> value;
  double tail_bound;  // |kernel at tau = 0| times the declared tail mass
};

struct CoefficientResult {
  std::complex<double> value;
  double error_estimate;  // outer quadrature error scaled by the prefactor
  bool converged;
};

// Inversion prefactor (n / pi) sinh(pi n) gamma_pair(n, mu); reduces to
// n tanh(pi n) at mu = 0.
std::complex<double> inversion_prefactor(const MuParameter& mu, int n);

// Integral over (1, infinity) of (x-1)^(-sigma) * g(x-1).  The callback
// receives the exact distance d = x - 1 (evaluate smooth factors at 1 + d);
// Re sigma must be below the quadrature singular-order cap.  A positive x_max
// replaces the tail with a hard cutoff.  Convergence is certified piecewise.
IntegralResult integrate_from_one(const std::function<std::complex<double>(double)>& g,
                                  std::complex<double> sigma, DecayHint tail,
                                  const QuadratureConfig& cfg, double x_max = 0.0);

// Synthesis F(x) = sum_m a_m P^mu_{i m - 1/2}(x) with the tail bound from the
// declared residual mass.
SeriesResult forward_series(const CoefficientSequence& a, const MuParameter& mu, double x,
                            const TransformConfig& tc = {});

// Coefficient recovery a_n = prefactor * integral over (1, infinity) of the
// omega = pi incomplete kernel times F.  f_tail_power is the algebraic decay
// power of F itself (F ~ x^(-f_tail_power)); it must not overstate the decay.
CoefficientResult inverse_coefficients(const std::function<std::complex<double>(double)>& F,
                                       double f_tail_power, const MuParameter& mu, int n,
                                       const TransformConfig& tc = {});
CoefficientResult inverse_coefficients(const SampledFunction& F, const MuParameter& mu, int n,
                                       const TransformConfig& tc = {});

// Coefficients n = 1..n_count; independent jobs, deterministic order.
std::vector<CoefficientResult> inverse_coefficients_batch(
    const std::function<std::complex<double>(double)>& F, double f_tail_power,
    const MuParameter& mu, int n_count, const TransformConfig& tc = {},
    Exec exec = Exec::parallel);

// Inner series of the dual expansion: G(x) = sum_m a_m gamma_pair(m, mu)
// P^mu_{i m - 1/2}(x, pi).
std::function<std::complex<double>(double)> dual_series(const CoefficientSequence& a,
                                                        const MuParameter& mu,
                                                        const TransformConfig& tc = {});

// Dual recovery a_n = (n / pi) sinh(pi n) * integral of the complete kernel
// times G; requires the strict regime |Re mu| < 1/2.
CoefficientResult dual_inverse_coefficients(const std::function<std::complex<double>(double)>& G,
                                            const MuParameter& mu, int n,
                                            const TransformConfig& tc = {});
CoefficientResult dual_inverse_coefficients(const CoefficientSequence& a, const MuParameter& mu,
                                            int n, const TransformConfig& tc = {});

// f(t) = (t^2 - 1)^(-mu/2) * integral over (-pi, pi) of psi(u) sinh(u)
// (t + cosh u)^(mu - 3/2) du, evaluated directly from the trigonometric data.
std::complex<double> evaluate_f_from_spec(const FunctionSpec& spec, double t,
                                          const TransformConfig& tc = {});

// Closed-form projection of the represented function onto the complete
// kernel: sqrt(2 pi) pi b_n / (sinh(pi n) Gamma(3/2 - mu)); exactly zero for
// n beyond the sine support.
std::complex<double> coefficients_from_psi(const FunctionSpec& spec, int n);

// The same projection integral over (1, infinity) by quadrature, for
// cross-checking the closed form.
IntegralResult project_spec_function(const FunctionSpec& spec, int n,
                                     const TransformConfig& tc = {});

// Reconstruction sum_n prefactor(n) * P^mu_{i n - 1/2}(x, pi) * c_n with the
// closed-form c_n; terminates at the sine degree.  Rejects tc.n_max below the
// degree.
std::complex<double> expand_function_incomplete(const FunctionSpec& spec, double x,
                                                const TransformConfig& tc = {});

// Two-stage expansion from coefficient data: first project the synthesized
// series onto the incomplete kernels (d_n by quadrature, with the
// biorthogonality closed form pi a_n / (n sinh(pi n) gamma_pair) kept
// alongside), then rebuild with the complete kernel.
struct CompleteExpansion {
  std::vector<std::complex<double>> d;             // quadrature values
  std::vector<double> d_error;                     // scaled error estimates
  std::vector<std::complex<double>> d_closed_form; // biorthogonality targets
  bool converged = true;
};

CompleteExpansion expand_complete_coefficients(const CoefficientSequence& a,
                                               const MuParameter& mu,
                                               const TransformConfig& tc = {}, int n_count = 0,
                                               Exec exec = Exec::parallel);
std::complex<double> evaluate_complete_expansion(const CompleteExpansion& ce,
                                                 const MuParameter& mu, double x,
                                                 const TransformConfig& tc = {});

}  // namespace mfk
