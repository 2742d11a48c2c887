#include "mfk/kernels.hpp"

#include <cmath>
#include <numbers>

namespace mfk {
namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2OverPi = std::sqrt(2.0 / kPi);

using cplx = std::complex<double>;

cplx pow_positive(double base, cplx e) {
  // base > 0; principal branch
  return std::exp(e * std::log(base));
}

void require_argument(double x) {
  if (!(x > 1.0)) throw std::domain_error("conical kernel argument must satisfy x > 1");
}

double x_squared_minus_one(double x) {
  return (x - 1.0) * (x + 1.0);  // keeps precision for x near 1
}

// sinh(d/2)/d with its d -> 0 limit; deep subdivision can round the distance
// to exactly zero.
double sinh_half_ratio(double d) { return d == 0.0 ? 0.5 : std::sinh(0.5 * d) / d; }

void check_converged(const IntegralResult& r, const char* what) {
  if (!r.converged)
    throw convergence_error(std::string(what) + ": quadrature did not converge");
}

}  // namespace

MuParameter MuParameter::broad(cplx mu) {
  if (!(std::isfinite(mu.real()) && std::isfinite(mu.imag())))
    throw std::domain_error("mu must be finite");
  if (!(mu.real() < 0.5)) throw std::domain_error("Re mu must be < 1/2");
  return MuParameter{mu, false};
}

MuParameter MuParameter::strict(cplx mu) {
  if (!(std::isfinite(mu.real()) && std::isfinite(mu.imag())))
    throw std::domain_error("mu must be finite");
  if (!(std::fabs(mu.real()) < 0.5)) throw std::domain_error("|Re mu| must be < 1/2");
  return MuParameter{mu, true};
}

void MuParameter::require_strict() const {
  if (!(std::fabs(value.real()) < 0.5))
    throw std::domain_error("|Re mu| must be < 1/2 for this operation");
}

KernelDegree KernelDegree::discrete(int n) {
  if (n < 1) throw std::domain_error("discrete kernel degree requires n >= 1");
  return KernelDegree{static_cast<double>(n)};
}

KernelDegree KernelDegree::continuous(double tau) {
  if (!(tau >= 0.0)) throw std::domain_error("kernel degree requires tau >= 0");
  return KernelDegree{tau};
}

double DecayBound::evaluate(double t) const {
  if (!(t > 0.0)) throw std::domain_error("decay bound is stated for t > 0");
  return constant * std::pow(t, -gamma_exponent) * std::pow(1.0 + t, -0.5 * mu.real());
}

std::complex<double> legendre_conical_mehler(const MuParameter& mu, KernelDegree deg, double x,
                                             const QuadratureConfig& cfg) {
  require_argument(x);
  const cplx m = mu.value;
  const double tau = deg.tau;
  const double alpha = std::acosh(x);
  const double p = 0.5 + m.real();  // endpoint singularity order at t = alpha

  IntegralResult res;
  if (m.imag() == 0.0) {
    const double mr = m.real();
    if (p > 0.0) {
      auto g = [alpha, tau, p](double d) {
        const double t = alpha - d;
        // cosh(alpha) - cosh(t) = d * w with w bounded away from 0
        const double w = 2.0 * std::sinh(0.5 * (alpha + t)) * sinh_half_ratio(d);
        return std::cos(tau * t) * std::pow(w, -p);
      };
      res = integrate_endpoint_singular(g, 0.0, alpha, p, SingularEnd::right, cfg);
    } else {
      auto f = [alpha, tau, p](double t) {
        const double cd = 2.0 * std::sinh(0.5 * (alpha + t)) * std::sinh(0.5 * (alpha - t));
        return std::cos(tau * t) * std::pow(cd, -p);
      };
      res = integrate_adaptive(f, 0.0, alpha, cfg);
    }
    check_converged(res, "conical kernel, finite integral route");
    const double pref = kSqrt2OverPi * std::pow(std::sinh(alpha), mr) / std::tgamma(0.5 - mr);
    return {pref * res.value.real(), 0.0};
  }

  const double pr = std::max(p, 0.0);
  const cplx rest = -(0.5 + m);  // full exponent of the cosh difference
  if (pr > 0.0) {
    const double im = m.imag();
    auto g = [alpha, tau, rest, pr, im](double d) -> cplx {
      const double t = alpha - d;
      const double w = 2.0 * std::sinh(0.5 * (alpha + t)) * sinh_half_ratio(d);
      // the driver supplies d^(-pr); the remaining d power is purely oscillatory
      // and needs d at full relative precision, which the driver guarantees
      const cplx phase = d > 0.0 ? std::exp(cplx(0.0, -im * std::log(d))) : cplx(1.0, 0.0);
      return std::cos(tau * t) * std::exp(rest * std::log(w)) * phase;
    };
    res = integrate_endpoint_singular(g, 0.0, alpha, pr, SingularEnd::right, cfg);
  } else {
    auto f = [alpha, tau, rest](double t) -> cplx {
      const double cd = 2.0 * std::sinh(0.5 * (alpha + t)) * std::sinh(0.5 * (alpha - t));
      return std::cos(tau * t) * std::exp(rest * std::log(cd));
    };
    res = integrate_adaptive(f, 0.0, alpha, cfg);
  }
  check_converged(res, "conical kernel, finite integral route");
  const cplx pref = kSqrt2OverPi * pow_positive(std::sinh(alpha), m) / complex_gamma(0.5 - m);
  return pref * res.value;
}

std::complex<double> legendre_conical_integral(const MuParameter& mu, double tau, double x,
                                               const QuadratureConfig& cfg) {
  require_argument(x);
  if (!(tau >= 0.0)) throw std::domain_error("kernel degree requires tau >= 0");
  const cplx m = mu.value;
  // The integrand decays like (cosh t)^(Re mu - 1/2) only once cosh t
  // dominates x, so the integral is split at acosh x: a plain oscillatory
  // finite piece, then a tail whose true exponential rate drives the map.
  const double split = std::max(std::acosh(x), 1.0);
  const double rate = 0.5 - m.real();
  QuadratureConfig half = cfg;
  half.abs_tol = 0.5 * cfg.abs_tol;

  IntegralResult res;
  if (m.imag() == 0.0) {
    const double e = m.real() - 0.5;
    auto f = [tau, x, e](double t) {
      const double w = std::cosh(t) + x;
      return std::cos(tau * t) * std::pow(w, e);
    };
    res = integrate_adaptive(f, 0.0, split, half);
    const IntegralResult tail =
        integrate_semi_infinite(f, split, DecayHint::exponential(rate), half);
    res.value += tail.value;
    res.error_estimate += tail.error_estimate;
    res.evaluations += tail.evaluations;
    res.converged = res.converged && tail.converged;
    check_converged(res, "conical kernel, semi-infinite route");
    const double pref = kSqrt2OverPi * std::tgamma(0.5 - m.real()) *
                        std::pow(x_squared_minus_one(x), -0.5 * m.real()) /
                        gamma_pair(tau, m).real();
    return {pref * res.value.real(), 0.0};
  }

  const cplx e = m - 0.5;
  auto f = [tau, x, e](double t) -> cplx {
    const double w = std::cosh(t) + x;
    if (!(w < 1e300)) return {0.0, 0.0};
    return std::cos(tau * t) * std::exp(e * std::log(w));
  };
  res = integrate_adaptive(f, 0.0, split, half);
  {
    const IntegralResult tail =
        integrate_semi_infinite(f, split, DecayHint::exponential(rate), half);
    res.value += tail.value;
    res.error_estimate += tail.error_estimate;
    res.evaluations += tail.evaluations;
    res.converged = res.converged && tail.converged;
  }
  check_converged(res, "conical kernel, semi-infinite route");
  const cplx pref = kSqrt2OverPi * complex_gamma(0.5 - m) *
                    pow_positive(x_squared_minus_one(x), -0.5 * m) / gamma_pair(tau, m);
  return pref * res.value;
}

std::complex<double> mellin_barnes_legendre(const MuParameter& mu, int n, double x_shift,
                                            const MellinBarnesConfig& cfg) {
  if (n < 0) throw std::domain_error("contour route requires integer degree n >= 0");
  if (!(x_shift > 0.0))
    throw std::domain_error("contour route requires x_shift > 0 (argument above 1)");
  const cplx m = mu.value;
  const double g = cfg.gamma_abscissa;
  if (!(g > 0.5 * m.real() && g < 0.5 - 0.5 * m.real()))
    throw std::invalid_argument("mellin_barnes_legendre: abscissa outside the convergence strip");
  const double T = cfg.truncation_height > 0.0 ? cfg.truncation_height : n + 40.0;
  const double lnx = std::log(x_shift);
  const cplx half_mu = 0.5 * m;
  const cplx top1 = cplx(0.5, n) - half_mu;   // poles of the two right-moving factors
  const cplx top2 = cplx(0.5, -n) - half_mu;
  const cplx bot = 1.0 - half_mu;

  auto integrand = [=](double v) -> cplx {
    const cplx s(g, v);
    const cplx num =
        complex_gamma(s - half_mu) * complex_gamma(top1 - s) * complex_gamma(top2 - s);
    return num / complex_gamma(bot - s) * std::exp(cplx(0.0, -v * lnx));
  };

  // the contour ends must already be negligible, otherwise T was too small
  const double edge = std::max(std::abs(integrand(-T)), std::abs(integrand(T)));
  const double scale = std::abs(integrand(0.0));
  if (!(edge <= 1e-13 * std::max(scale, 1e-280)))
    throw convergence_error("mellin_barnes_legendre: truncation height too small");

  IntegralResult res = integrate_adaptive(integrand, -T, T, cfg.quad);
  check_converged(res, "mellin_barnes_legendre");
  const cplx pref = std::exp(-half_mu * std::log1p(x_shift)) / gamma_pair(n, m);
  return pref * std::pow(x_shift, -g) * res.value / (2.0 * kPi);
}

std::complex<double> conical_kernel(const MuParameter& mu, double tau, double x, KernelRoute route,
                                    const QuadratureConfig& cfg) {
  if (route == KernelRoute::automatic) {
    // The finite-integral form holds everywhere and carries no cancellation;
    // the semi-infinite form loses e^(pi tau) of headroom to oscillation, an
    // error floor the pairing integrals can resolve.  Fall back to it only
    // when the finite form's endpoint exponent mu + 1/2 is out of reach.
    route = (mu.value.real() + 0.5 < cfg.singular_order_cap) ? KernelRoute::mehler
                                                             : KernelRoute::legendre;
  }
  switch (route) {
    case KernelRoute::mehler:
      return legendre_conical_mehler(mu, KernelDegree::continuous(tau), x, cfg);
    case KernelRoute::legendre:
      return legendre_conical_integral(mu, tau, x, cfg);
    case KernelRoute::mellin_barnes: {
      const int n = static_cast<int>(std::lround(tau));
      if (std::fabs(tau - n) > 0.0)
        throw std::invalid_argument("mellin_barnes route needs an integer degree");
      require_argument(x);
      MellinBarnesConfig mb;
      mb.quad.rel_tol = std::min(cfg.rel_tol, 1e-11);
      return mellin_barnes_legendre(mu, n, 0.5 * (x - 1.0), mb);
    }
    default:
      throw std::invalid_argument("unknown kernel route");
  }
}

std::complex<double> conical_regular_part(const MuParameter& mu, double tau, double x, double d,
                                          KernelRoute route, const QuadratureConfig& cfg) {
  if (!(d > 0.0)) throw std::domain_error("conical_regular_part requires d > 0");
  const cplx m = mu.value;
  // Ascending series in the exact distance:
  //   kernel * d^(mu/2) = (2 + d)^(mu/2) / Gamma(1 - mu) * sum_k c_k,
  //   c_0 = 1,  c_{k+1} = c_k * ((k + 1/2)^2 + tau^2) * (-d/2)
  //                           / ((k + 1)(k + 1 - mu)).
  // The cut keeps the first term ratio below ~1/2 for any tau.
  const double cut = std::min(1e-6, 1.0 / (2.0 + tau * tau));
  if (d < cut) {
    cplx sum = 1.0;
    cplx term = 1.0;
    for (int k = 0; k < 64; ++k) {
      const double h = k + 0.5;
      term *= (h * h + tau * tau) * (-0.5 * d) / ((k + 1.0) * (cplx(k + 1.0, 0.0) - m));
      sum += term;
      if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return pow_positive(2.0 + d, 0.5 * m) / complex_gamma(1.0 - m) * sum;
  }
  const cplx k = conical_kernel(mu, tau, x, route, cfg);
  if (m == cplx(0.0, 0.0)) return k;
  return k * std::exp(0.5 * m * std::log(d));
}

std::complex<double> incomplete_legendre(const MuParameter& mu, int n, double x, double omega,
                                         const QuadratureConfig& cfg) {
  require_argument(x);
  if (n < 0) throw std::domain_error("incomplete kernel requires n >= 0");
  if (!(omega >= 0.0)) throw std::domain_error("incomplete kernel requires omega >= 0");
  const cplx m = mu.value;
  if (omega == 0.0) return {0.0, 0.0};

  IntegralResult res;
  if (m.imag() == 0.0) {
    const double e = m.real() - 0.5;
    auto f = [n, x, e](double t) {
      const double w = std::cosh(t) + x;
      if (!(w < 1e300)) return 0.0;
      return std::cos(n * t) * std::pow(w, e);
    };
    res = integrate_adaptive(f, 0.0, omega, cfg);
    check_converged(res, "incomplete kernel");
    const double pref = kSqrt2OverPi * std::tgamma(0.5 - m.real()) *
                        std::pow(x_squared_minus_one(x), -0.5 * m.real()) /
                        gamma_pair(n, m).real();
    return {pref * res.value.real(), 0.0};
  }
  const cplx e = m - 0.5;
  auto f = [n, x, e](double t) -> cplx {
    const double w = std::cosh(t) + x;
    if (!(w < 1e300)) return {0.0, 0.0};
    return std::cos(n * t) * std::exp(e * std::log(w));
  };
  res = integrate_adaptive(f, 0.0, omega, cfg);
  check_converged(res, "incomplete kernel");
  const cplx pref = kSqrt2OverPi * complex_gamma(0.5 - m) *
                    pow_positive(x_squared_minus_one(x), -0.5 * m) / gamma_pair(n, m);
  return pref * res.value;
}

IncompleteKernel::IncompleteKernel(const MuParameter& mu, int m) : mu_(mu.value), m_(m) {
  if (m < 1) throw std::domain_error("integrated-by-parts kernel requires m >= 1");
  real_mu_ = mu_.imag() == 0.0;
  if (real_mu_) {
    prefactor_ = {kSqrt2OverPi * std::tgamma(1.5 - mu_.real()) /
                      (m * gamma_pair(m, mu_).real()),
                  0.0};
  } else {
    prefactor_ = kSqrt2OverPi * complex_gamma(1.5 - mu_) / (double(m) * gamma_pair(m, mu_));
  }
}

std::complex<double> IncompleteKernel::regular_part(double x, const QuadratureConfig& cfg) const {
  require_argument(x);
  const int m = m_;
  IntegralResult res;
  if (real_mu_) {
    const double e = mu_.real() - 1.5;
    auto f = [m, x, e](double t) {
      return std::sin(m * t) * std::sinh(t) * std::pow(std::cosh(t) + x, e);
    };
    res = integrate_adaptive(f, 0.0, kPi, cfg);
    check_converged(res, "incomplete kernel (integrated by parts)");
    return {prefactor_.real() * std::pow(x + 1.0, -0.5 * mu_.real()) * res.value.real(), 0.0};
  }
  const cplx e = mu_ - 1.5;
  auto f = [m, x, e](double t) -> cplx {
    return std::sin(m * t) * std::sinh(t) * std::exp(e * std::log(std::cosh(t) + x));
  };
  res = integrate_adaptive(f, 0.0, kPi, cfg);
  check_converged(res, "incomplete kernel (integrated by parts)");
  return prefactor_ * pow_positive(x + 1.0, -0.5 * mu_) * res.value;
}

std::complex<double> IncompleteKernel::operator()(double x, const QuadratureConfig& cfg) const {
  const cplx reg = regular_part(x, cfg);
  if (real_mu_) return {std::pow(x - 1.0, -0.5 * mu_.real()) * reg.real(), 0.0};
  return pow_positive(x - 1.0, -0.5 * mu_) * reg;
}

std::complex<double> incomplete_legendre_ibp(const MuParameter& mu, int m, double x,
                                             const QuadratureConfig& cfg) {
  return IncompleteKernel(mu, m)(x, cfg);
}

double bessel_k_imag(double tau, double y, const QuadratureConfig& cfg) {
  if (!(y > 0.0)) throw std::domain_error("bessel_k_imag requires y > 0");
  if (!std::isfinite(tau)) throw std::domain_error("bessel_k_imag requires finite tau");
  // e^(-y cosh t) is flat until cosh t reaches ~1/y, then dies at rate >= y;
  // the hint must put the truncation past that knee even for tiny y.
  const double rate = std::max(y, 30.0 / std::acosh(1.0 + 746.0 / y));
  auto f = [tau, y](double t) { return std::exp(-y * std::cosh(t)) * std::cos(tau * t); };
  IntegralResult res = integrate_semi_infinite(f, 0.0, DecayHint::exponential(rate), cfg);
  check_converged(res, "bessel_k_imag");
  return res.value.real();
}

double incomplete_bessel(int n, double y, double omega, const QuadratureConfig& cfg) {
  if (n < 0) throw std::domain_error("incomplete Bessel integral requires n >= 0");
  if (!(y >= 0.0)) throw std::domain_error("incomplete Bessel integral requires y >= 0");
  if (!(omega >= 0.0)) throw std::domain_error("incomplete Bessel integral requires omega >= 0");
  if (omega == 0.0) return 0.0;
  auto f = [n, y](double u) { return std::exp(-y * std::cosh(u)) * std::cos(n * u); };
  IntegralResult res = integrate_adaptive(f, 0.0, omega, cfg);
  check_converged(res, "incomplete_bessel");
  return res.value.real();
}

double incomplete_bessel_ibp(int n, double y, const QuadratureConfig& cfg) {
  if (n < 1) throw std::domain_error("integrated-by-parts Bessel integral requires n >= 1");
  if (!(y >= 0.0)) throw std::domain_error("incomplete Bessel integral requires y >= 0");
  const double n2 = static_cast<double>(n) * n;
  auto f = [n, y](double u) {
    const double ch = std::cosh(u), sh = std::sinh(u);
    return std::exp(-y * ch) * (ch - y * sh * sh) * std::cos(n * u);
  };
  IntegralResult res = integrate_adaptive(f, 0.0, kPi, cfg);
  check_converged(res, "incomplete_bessel_ibp");
  const double sign = (n % 2 == 0) ? -1.0 : 1.0;  // (-1)^(n+1)
  const double boundary = sign * std::sinh(kPi) * y * std::exp(-y * std::cosh(kPi)) / n2;
  return boundary + (y / n2) * res.value.real();
}

DecayBound compute_decay_bound(const MuParameter& mu, double gamma_exponent,
                               const MellinBarnesConfig& cfg) {
  const cplx m = mu.value;
  if (!(gamma_exponent > 0.5 * m.real() && gamma_exponent < 0.5 * (1.0 - m.real())))
    throw std::invalid_argument("compute_decay_bound: exponent outside the convergence strip");
  const double T = cfg.truncation_height > 0.0 ? cfg.truncation_height : 40.0;
  const cplx half_mu = 0.5 * m;
  const cplx c1 = 0.5 * (1.0 - m);
  const cplx c2 = 1.0 - half_mu;
  const double denom2 = std::norm(complex_gamma(0.5 - m));

  auto f = [=](double v) {
    const cplx s(gamma_exponent, v);
    const double num = std::abs(complex_gamma(s - half_mu)) * std::norm(complex_gamma(c1 - s));
    return num / (denom2 * std::abs(complex_gamma(c2 - s)));
  };
  QuadratureConfig qc = cfg.quad;
  qc.abs_tol = 1e-14;
  qc.rel_tol = 1e-11;
  IntegralResult res = integrate_adaptive(f, -T, T, qc);
  check_converged(res, "compute_decay_bound");
  return DecayBound{res.value.real() / (2.0 * kPi), gamma_exponent, m};
}

}  // namespace mfk
