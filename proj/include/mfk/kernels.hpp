#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "mfk/gamma.hpp"
#include "mfk/quadrature.hpp"

namespace mfk {

// Raised when an underlying quadrature cannot reach its tolerance.
class convergence_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Order parameter with the half-plane it was validated against.
// broad: Re mu < 1/2, enough for kernel evaluation and the forward/inverse
// pair.  strict: |Re mu| < 1/2, required by orthogonality, the dual inversion,
// and expansions over complete kernels.
struct MuParameter {
  std::complex<double> value{0.0, 0.0};
  bool strict_regime = false;

  static MuParameter broad(std::complex<double> mu);
  static MuParameter strict(std::complex<double> mu);

  // Checks the condition itself rather than the construction tag, so a
  // broad-tagged value inside the narrow strip is still accepted.
  void require_strict() const;
};

// Degree parameter i*tau - 1/2 of the conical kernel.  tau = 0 is admitted
// here because tail and decay bounds need the limiting kernel; the transforms
// themselves index from n = 1.
struct KernelDegree {
  double tau = 0.0;
  static KernelDegree discrete(int n);
  static KernelDegree continuous(double tau);
};

struct MellinBarnesConfig {
  double gamma_abscissa = 0.25;  // contour Re s, must lie inside the strip
  double truncation_height = 0.0;  // 0 selects n + 40
  QuadratureConfig quad{1e-30, 1e-11, 4000, 10.0, 0.95};
};

// Envelope constant for the tau = 0 kernel: |P(2t+1)| <= constant *
// t^(-gamma_exponent) * (1+t)^(-Re mu / 2).
struct DecayBound {
  double constant = 0.0;
  double gamma_exponent = 0.0;
  std::complex<double> mu{0.0, 0.0};

  double evaluate(double t) const;
};

enum class KernelRoute { automatic, mehler, legendre, mellin_barnes };

// Conical kernel P^mu_{i tau - 1/2}(x) through the finite integral over
// (0, acosh x) with an inverse square root type endpoint singularity.
// Well conditioned for every tau; cost grows with acosh x.
std::complex<double> legendre_conical_mehler(const MuParameter& mu, KernelDegree deg, double x,
                                             const QuadratureConfig& cfg = {});

// Same kernel through the semi-infinite cosine integral.  Cheap for large x
// but the integrand oscillates with amplitude e^(pi tau) relative to the
// result, so roundoff grows accordingly; intended for small tau.
std::complex<double> legendre_conical_integral(const MuParameter& mu, double tau, double x,
                                               const QuadratureConfig& cfg = {});

// Same kernel at argument 2*x_shift + 1 through a vertical contour of gamma
// factors; the integrand carries the e^(-pi n) smallness pointwise, which
// makes this the natural cross-check route.
std::complex<double> mellin_barnes_legendre(const MuParameter& mu, int n, double x_shift,
                                            const MellinBarnesConfig& cfg = {});

// Route dispatcher.  automatic picks the finite-integral form unless its
// endpoint exponent Re mu + 1/2 exceeds the singular order cap, in which
// case the semi-infinite form takes over.
std::complex<double> conical_kernel(const MuParameter& mu, double tau, double x,
                                    KernelRoute route = KernelRoute::automatic,
                                    const QuadratureConfig& cfg = {});

// Kernel argument from an exact distance to the branch point.  1 + d
// collapses to 1 for d below half an ulp, so evaluation saturates at the
// smallest representable argument; the panels that reach such distances carry
// integrable-singularity mass of order d^(1 - Re mu), far below any
// tolerance in use.
inline double argument_from_distance(double d) {
  const double x = 1.0 + d;
  return x > 1.0 ? x : std::nextafter(1.0, 2.0);
}

// Complete kernel with its (x-1)^(-mu/2) branch factor cancelled, the
// counterpart of IncompleteKernel::regular_part: conical_kernel(x) equals
// (x-1)^(-mu/2) * conical_regular_part(mu, tau, x, d, ...) for d = x - 1.
// Outer integrands pairing the complete kernel with another stripped
// (x-1)^(-mu/2) factor use this and declare the combined endpoint order mu;
// leaving the kernel's own factor to refinement instead stalls the adaptive
// head once the paired magnitudes grow.  d is the exact distance supplied by
// the endpoint engine and must be positive.  Below a small distance cut the
// product switches to the ascending series about the branch point: there the
// integral routes only see the rounded 1 + d, which starves the compensated
// product of distance resolution at relative error ~ ulp/d.
std::complex<double> conical_regular_part(const MuParameter& mu, double tau, double x, double d,
                                          KernelRoute route, const QuadratureConfig& cfg = {});

// Incomplete kernel: the semi-infinite cosine integral truncated at omega.
std::complex<double> incomplete_legendre(const MuParameter& mu, int n, double x, double omega,
                                         const QuadratureConfig& cfg = {});

// Incomplete kernel at omega = pi after integrating by parts once; the
// boundary term vanishes there and the sine-weighted integrand is what the
// inverse transform consumes.
std::complex<double> incomplete_legendre_ibp(const MuParameter& mu, int m, double x,
                                             const QuadratureConfig& cfg = {});

// Fixed-parameter evaluator for the integrated-by-parts incomplete kernel;
// hoists the gamma prefactor out of per-point quadrature loops.
class IncompleteKernel {
 public:
  IncompleteKernel(const MuParameter& mu, int m);
  std::complex<double> operator()(double x, const QuadratureConfig& cfg) const;
  // Kernel with the (x-1)^(-mu/2) factor removed: operator() equals
  // (x-1)^(-mu/2) * regular_part(x).  Outer integrals over (1, infinity) use
  // this so the singular factor can be applied from the exact distance x - 1
  // supplied by the endpoint-substitution engine.
  std::complex<double> regular_part(double x, const QuadratureConfig& cfg) const;
  int harmonic() const { return m_; }

 private:
  std::complex<double> mu_;
  std::complex<double> prefactor_;  // everything except (x^2-1)^(-mu/2) and the integral
  int m_;
  bool real_mu_;
};

// Modified Bessel function of imaginary order, K_{i tau}(y), y > 0.
double bessel_k_imag(double tau, double y, const QuadratureConfig& cfg = {});

// Incomplete Bessel integral: cosine-weighted exponential over (0, omega).
double incomplete_bessel(int n, double y, double omega, const QuadratureConfig& cfg = {});

// The omega = pi incomplete Bessel integral after integrating by parts twice;
// same value as incomplete_bessel(n, y, pi) with the oscillation damped by n^2.
double incomplete_bessel_ibp(int n, double y, const QuadratureConfig& cfg = {});

// Envelope constant for the decay of the tau = 0 kernel along x = 2t + 1.
DecayBound compute_decay_bound(const MuParameter& mu, double gamma_exponent,
                               const MellinBarnesConfig& cfg = {});

}  // namespace mfk
