#include "mfk/oracle.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mfk/gamma.hpp"

namespace mfk {
namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

cplx pow_positive(double base, cplx p) {
  if (p == cplx(0.0, 0.0)) return {1.0, 0.0};
  return std::exp(p * std::log(base));
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(int v) { return std::to_string(v); }

std::string fmt(cplx v) {
  if (v.imag() == 0.0) return fmt(v.real());
  return fmt(v.real()) + (v.imag() < 0.0 ? "-" : "+") + fmt(std::fabs(v.imag())) + "i";
}

// Fills the error fields and judges the report; every verifier funnels
// through here so passed always agrees with passes_with.
void judge(IdentityReport& r, const OracleThresholds& th) {
  r.abs_err = std::abs(r.lhs - r.rhs);
  r.rel_err = r.abs_err / std::max(std::abs(r.rhs), 1e-300);
  r.passed = passes_with(r, th);
}

void mark_failed(IdentityReport& r, const std::string& what) {
  r.abs_err = kInf;
  r.rel_err = kInf;
  r.passed = false;
  r.params.emplace_back("error", what);
}

}  // namespace

std::string identity_name(IdentityId id) {
  switch (id) {
    case IdentityId::laplace_transform: return "laplace_transform";
    case IdentityId::orthogonality: return "orthogonality";
    case IdentityId::projection: return "projection";
    case IdentityId::kontorovich_lebedev: return "kontorovich_lebedev";
    case IdentityId::normalization_factor: return "normalization_factor";
    case IdentityId::kernel_consistency: return "kernel_consistency";
    case IdentityId::decay_envelope: return "decay_envelope";
  }
  throw std::invalid_argument("identity_name: unknown id");
}

IdentityId identity_from_name(const std::string& name) {
  for (IdentityId id : all_identities())
    if (identity_name(id) == name) return id;
  throw std::invalid_argument("unknown identity: " + name);
}

std::vector<IdentityId> all_identities() {
  return {IdentityId::kernel_consistency, IdentityId::normalization_factor,
          IdentityId::laplace_transform,  IdentityId::projection,
          IdentityId::kontorovich_lebedev, IdentityId::orthogonality,
          IdentityId::decay_envelope};
}

OracleThresholds OracleThresholds::uniform(double v) {
  OracleThresholds th;
  th.single_integral = v;
  th.singular_integral = v;
  th.matrix = v;
  th.factor = v;
  th.laplace_zero_abs = v;
  th.projection_zero_abs = v;
  th.kl_zero_abs = v;
  return th;
}

OracleThresholds OracleThresholds::scaled(double f) const {
  OracleThresholds th = *this;
  th.single_integral *= f;
  th.singular_integral *= f;
  th.matrix *= f;
  th.factor *= f;
  th.laplace_zero_abs *= f;
  th.projection_zero_abs *= f;
  th.kl_zero_abs *= f;
  return th;
}

bool passes_with(const IdentityReport& r, const OracleThresholds& th) {
  switch (r.id) {
    case IdentityId::laplace_transform:
      return r.zero_target ? r.abs_err <= th.laplace_zero_abs
                           : r.rel_err <= th.single_integral;
    case IdentityId::orthogonality:
      return r.zero_target ? r.abs_err <= th.matrix * r.threshold_scale
                           : r.rel_err <= th.matrix;
    case IdentityId::projection:
      return r.zero_target ? r.abs_err <= th.projection_zero_abs
                           : r.rel_err <= th.singular_integral;
    case IdentityId::kontorovich_lebedev:
      return r.zero_target ? r.abs_err <= th.kl_zero_abs
                           : r.rel_err <= th.single_integral;
    case IdentityId::normalization_factor:
      return r.rel_err <= th.factor;
    case IdentityId::kernel_consistency:
      return r.rel_err <= th.single_integral;
    case IdentityId::decay_envelope:
      return r.passed;  // strict inequality, thresholds do not apply
  }
  return false;
}

IdentityReport verify_laplace_identity(const MuParameter& mu, int m, double y,
                                       const TransformConfig& tc,
                                       const OracleThresholds& th) {
  if (!(y > 0.0)) throw std::domain_error("laplace identity requires y > 0");
  const double tau = KernelDegree::discrete(m).tau;
  IdentityReport r;
  r.id = IdentityId::laplace_transform;
  r.params = {{"mu", fmt(mu.value)}, {"m", fmt(m)}, {"y", fmt(y)}};

  const cplx mv = mu.value;
  r.rhs = std::sqrt(2.0 / kPi) * pow_positive(y, mv - 0.5) *
          bessel_k_imag(tau, y, tc.kernel_quad);
  r.zero_target = std::abs(r.rhs) < th.laplace_zero_cut;

  QuadratureConfig q = tc.quad;
  // A zero target is judged absolutely at laplace_zero_abs, so the quadrature
  // budget must sit well under that, not under the generic tolerance.
  if (r.zero_target) q.abs_tol = std::min(q.abs_tol, th.laplace_zero_abs / 100.0);

  try {
    // weight split (x^2-1)^(-mu/2) = d^(-mu/2) (2+d)^(-mu/2); together with
    // the kernel's own branch factor the declared endpoint order is mu
    auto g = [&](double d) {
      const double x = argument_from_distance(d);
      return conical_regular_part(mu, tau, x, d, tc.route, tc.kernel_quad) *
             pow_positive(2.0 + d, -0.5 * mv) * std::exp(-y * x);
    };
    const IntegralResult lhs =
        integrate_from_one(g, mv, DecayHint::exponential(y), q, tc.x_max);
    r.lhs = lhs.value;
    if (!lhs.converged) {
      mark_failed(r, "outer quadrature did not converge");
      return r;
    }
  } catch (const convergence_error& e) {
    mark_failed(r, e.what());
    return r;
  }
  judge(r, th);
  return r;
}

OrthogonalityResult verify_orthogonality(const MuParameter& mu, int size,
                                         const TransformConfig& tc,
                                         const OracleThresholds& th, Exec exec) {
  mu.require_strict();
  if (size < 1) throw std::invalid_argument("orthogonality matrix size must be >= 1");

  OrthogonalityResult out;
  out.matrix.mu = mu.value;
  out.matrix.size = size;
  out.matrix.entries.assign(static_cast<std::size_t>(size) * size, cplx(0.0, 0.0));
  out.matrix.diagonal_targets.resize(size);
  for (int n = 1; n <= size; ++n)
    out.matrix.diagonal_targets[n - 1] =
        kPi / (n * std::sinh(kPi * n) * gamma_pair(n, mu.value));

  double maxdiag = 0.0;
  for (const cplx& d : out.matrix.diagonal_targets) maxdiag = std::max(maxdiag, std::abs(d));

  // The off-diagonal targets are exactly zero, so a relative stop rule cannot
  // apply; the absolute budget sits below the matrix threshold but above the
  // estimate floor of the large-m entries, whose head and tail pieces grow
  // like e^(pi m) before cancelling.
  QuadratureConfig q = tc.quad;
  q.rel_tol = 0.0;
  q.abs_tol = std::max(th.matrix / 100.0, 1e-9);
  // What the cancellation leaves behind is the noise of the inner kernel
  // evaluations scaled by those piece magnitudes, so the inner relative
  // budget runs well below the outer one.  The absolute budget is left
  // alone: the kernel routes cannot certify below their own roundoff floor.
  QuadratureConfig kq = tc.kernel_quad;
  kq.rel_tol = std::min(kq.rel_tol, 1e-13);

  const DecayHint tail = DecayHint::algebraic(1.75 + 0.5 * mu.value.real());

  out.reports.assign(static_cast<std::size_t>(size) * size, IdentityReport{});
  std::vector<char> bad(out.reports.size(), 0);
  std::vector<std::string> notes(out.reports.size());

  parallel_for(
      out.reports.size(),
      [&](std::size_t idx) {
        const int n = static_cast<int>(idx) / size + 1;
        const int m = static_cast<int>(idx) % size + 1;
        const double tau = KernelDegree::discrete(n).tau;
        const IncompleteKernel ik(mu, m);
        try {
          // both factors are regular parts, so the declared order is the
          // combined mu; the raw product stalls refinement once the
          // incomplete-kernel magnitudes grow with m
          auto g = [&](double d) {
            const double x = argument_from_distance(d);
            return conical_regular_part(mu, tau, x, d, tc.route, kq) *
                   ik.regular_part(x, kq);
          };
          const IntegralResult res =
              integrate_from_one(g, mu.value, tail, q, tc.x_max);
          out.matrix.entries[idx] = res.value;
          if (!res.converged) {
            bad[idx] = 1;
            notes[idx] = "outer quadrature did not converge";
          }
        } catch (const convergence_error& e) {
          bad[idx] = 1;
          notes[idx] = e.what();
        }
      },
      exec);

  for (std::size_t idx = 0; idx < out.reports.size(); ++idx) {
    const int n = static_cast<int>(idx) / size + 1;
    const int m = static_cast<int>(idx) % size + 1;
    IdentityReport& r = out.reports[idx];
    r.id = IdentityId::orthogonality;
    r.params = {{"mu", fmt(mu.value)}, {"n", fmt(n)}, {"m", fmt(m)}};
    r.lhs = out.matrix.entries[idx];
    if (n == m) {
      r.rhs = out.matrix.diagonal_targets[n - 1];
    } else {
      r.rhs = cplx(0.0, 0.0);
      r.zero_target = true;
      r.threshold_scale = maxdiag;
    }
    if (bad[idx]) {
      mark_failed(r, notes[idx]);
      continue;
    }
    judge(r, th);
  }
  return out;
}

IdentityReport verify_projection_identity(const MuParameter& mu, int n, double t,
                                          const TransformConfig& tc,
                                          const OracleThresholds& th) {
  if (!(t > 0.0)) throw std::domain_error("projection identity requires t > 0");
  const double tau = KernelDegree::discrete(n).tau;
  IdentityReport r;
  r.id = IdentityId::projection;
  r.params = {{"mu", fmt(mu.value)}, {"n", fmt(n)}, {"t", fmt(t)}};

  const cplx mv = mu.value;
  r.rhs = std::sqrt(2.0 * kPi) * std::sin(n * t) /
          (complex_gamma(cplx(1.5, 0.0) - mv) * std::sinh(t) * std::sinh(kPi * n));
  r.zero_target = std::abs(r.rhs) < th.sine_zero_cut;

  const double ct = std::cosh(t);
  try {
    // weight split as in the laplace identity; declared endpoint order mu
    auto g = [&](double d) {
      const double x = argument_from_distance(d);
      return conical_regular_part(mu, tau, x, d, tc.route, tc.kernel_quad) *
             pow_positive(2.0 + d, -0.5 * mv) * pow_positive(x + ct, mv - 1.5);
    };
    const IntegralResult lhs = integrate_from_one(
        g, mv, DecayHint::algebraic(1.75 + 0.5 * mv.real()), tc.quad, tc.x_max);
    r.lhs = lhs.value;
    if (!lhs.converged) {
      mark_failed(r, "outer quadrature did not converge");
      return r;
    }
  } catch (const convergence_error& e) {
    mark_failed(r, e.what());
    return r;
  }
  judge(r, th);
  return r;
}

IdentityReport verify_kl_identity(int n, double u, const TransformConfig& tc,
                                  const OracleThresholds& th) {
  if (!(u > 0.0 && u < kPi))
    throw std::domain_error("kontorovich-lebedev identity requires u in (0, pi)");
  const double tau = KernelDegree::discrete(n).tau;
  IdentityReport r;
  r.id = IdentityId::kontorovich_lebedev;
  r.params = {{"n", fmt(n)}, {"u", fmt(u)}};

  r.rhs = kPi * std::sin(n * u) / (std::sinh(u) * std::sinh(kPi * n));
  r.zero_target = std::abs(r.rhs) < th.sine_zero_cut;

  // Standard nested budgeting: the inner Bessel evaluations run 100x tighter
  // than the outer y-integral so their noise stays below the outer estimate.
  // The absolute floor keeps the inner request certifiable: near the zeros of
  // K the relative stop rule is unattainable, and the Bessel integrand's mass
  // grows like |ln y| as the outer refines toward y = 0, putting the roundoff
  // floor near 4e-13 at the smallest y the outer can probe.
  QuadratureConfig inner = tc.quad;
  inner.abs_tol = std::max(tc.quad.abs_tol / 100.0, 5e-13);
  inner.rel_tol = std::max(tc.quad.rel_tol / 100.0, 1e-12);
  const double cu = std::cosh(u);

  try {
    auto f = [&](double y) { return std::exp(-y * cu) * bessel_k_imag(tau, y, inner); };
    const IntegralResult lhs =
        integrate_semi_infinite(f, 0.0, DecayHint::exponential(cu + 1.0), tc.quad);
    r.lhs = cplx(lhs.value.real(), 0.0);
    if (!lhs.converged) {
      mark_failed(r, "outer quadrature did not converge");
      return r;
    }
  } catch (const convergence_error& e) {
    mark_failed(r, e.what());
    return r;
  }
  judge(r, th);
  return r;
}

IdentityReport verify_fock_factor(int n, const OracleThresholds& th) {
  if (n < 1) throw std::domain_error("factor identity requires n >= 1");
  IdentityReport r;
  r.id = IdentityId::normalization_factor;
  r.params = {{"n", fmt(n)}};
  // Gamma(z) = Gamma(z+8) / prod(z+j): the recurrence moves the evaluation
  // away from the imaginary axis, where the rational approximation loses a
  // digit, and each denominator factor (z+j)(conj z+j) = |z+j|^2 is real.
  const cplx z(0.5, static_cast<double>(n));
  constexpr int kShift = 8;
  const cplx num = complex_gamma(z + static_cast<double>(kShift)) *
                   complex_gamma(std::conj(z) + static_cast<double>(kShift));
  double den = 1.0;
  for (int j = 0; j < kShift; ++j) {
    const cplx f = z + static_cast<double>(j);
    den *= f.real() * f.real() + f.imag() * f.imag();
  }
  const cplx gg = num / den;
  r.lhs = (n / kPi) * std::sinh(kPi * n) * gg;
  r.rhs = cplx(n * std::tanh(kPi * n), 0.0);
  judge(r, th);
  return r;
}

IdentityReport verify_kernel_consistency(const MuParameter& mu, int n, double x,
                                         const TransformConfig& tc,
                                         const MellinBarnesConfig& mb,
                                         const OracleThresholds& th) {
  IdentityReport r;
  r.id = IdentityId::kernel_consistency;
  r.params = {{"mu", fmt(mu.value)}, {"n", fmt(n)}, {"x", fmt(x)}};
  cplx a, b, c;
  try {
    a = legendre_conical_mehler(mu, KernelDegree::discrete(n), x, tc.kernel_quad);
    b = legendre_conical_integral(mu, n, x, tc.kernel_quad);
    c = mellin_barnes_legendre(mu, n, 0.5 * (x - 1.0), mb);
  } catch (const convergence_error& e) {
    mark_failed(r, e.what());
    return r;
  }
  r.lhs = a;
  r.rhs = b;
  r.params.emplace_back("contour", fmt(c));
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), 1e-300});
  const double worst = std::max({std::abs(a - b), std::abs(a - c), std::abs(b - c)});
  r.abs_err = worst;
  r.rel_err = worst / scale;
  r.passed = passes_with(r, th);
  return r;
}

IdentityReport verify_decay_envelope(const DecayBound& bound, double t,
                                     const TransformConfig& tc) {
  if (!(t > 0.0)) throw std::domain_error("decay envelope requires t > 0");
  IdentityReport r;
  r.id = IdentityId::decay_envelope;
  r.params = {{"mu", fmt(cplx(bound.mu))},
              {"gamma", fmt(bound.gamma_exponent)},
              {"t", fmt(t)}};
  const MuParameter mu = MuParameter::broad(bound.mu);
  try {
    const double mag =
        std::abs(conical_kernel(mu, 0.0, 1.0 + 2.0 * t, tc.route, tc.kernel_quad));
    const double env = bound.evaluate(t);
    r.lhs = cplx(mag, 0.0);
    r.rhs = cplx(env, 0.0);
    r.abs_err = std::max(0.0, mag - env);   // amount of violation, 0 when it holds
    r.rel_err = mag / std::max(env, 1e-300);  // tightness ratio, <= 1 when it holds
    r.passed = std::isfinite(mag) && std::isfinite(env) && mag <= env;
  } catch (const convergence_error& e) {
    mark_failed(r, e.what());
  }
  return r;
}

namespace {

// Runs one identity's grid through parallel_for with slot-ordered results.
template <class Point, class Fn>
void run_points(std::vector<IdentityReport>& sink, const std::vector<Point>& pts,
                const Fn& eval, Exec exec) {
  std::vector<IdentityReport> slots(pts.size());
  parallel_for(
      pts.size(), [&](std::size_t i) { slots[i] = eval(pts[i]); }, exec);
  for (auto& r : slots) sink.push_back(std::move(r));
}

}  // namespace

std::vector<IdentityReport> run_suite(const SuiteConfig& cfg) {
  std::vector<IdentityReport> out;
  const SuiteGrids& g = cfg.grids;

  for (IdentityId id : cfg.selection) {
    switch (id) {
      case IdentityId::kernel_consistency: {
        struct Pt { cplx mu; int n; double x; };
        std::vector<Pt> pts;
        for (const cplx& mu : g.consistency_mu)
          for (int n : g.consistency_n)
            for (double x : g.consistency_x) pts.push_back({mu, n, x});
        run_points(out, pts,
                   [&](const Pt& p) {
                     return verify_kernel_consistency(MuParameter::broad(p.mu), p.n, p.x,
                                                      cfg.tc, cfg.mb, cfg.thresholds);
                   },
                   cfg.exec);
        break;
      }
      case IdentityId::normalization_factor: {
        std::vector<int> pts;
        for (int n = 1; n <= g.factor_n_max; ++n) pts.push_back(n);
        run_points(out, pts,
                   [&](int n) { return verify_fock_factor(n, cfg.thresholds); },
                   cfg.exec);
        break;
      }
      case IdentityId::laplace_transform: {
        struct Pt { cplx mu; int m; double y; };
        std::vector<Pt> pts;
        for (const cplx& mu : g.laplace_mu)
          for (int m : g.laplace_m)
            for (double y : g.laplace_y) pts.push_back({mu, m, y});
        if (g.laplace_include_far) pts.push_back({cplx(0.0, 0.0), 1, 20.0});
        run_points(out, pts,
                   [&](const Pt& p) {
                     return verify_laplace_identity(MuParameter::broad(p.mu), p.m, p.y,
                                                    cfg.tc, cfg.thresholds);
                   },
                   cfg.exec);
        break;
      }
      case IdentityId::projection: {
        struct Pt { cplx mu; int n; double t; };
        std::vector<Pt> pts;
        for (const cplx& mu : g.projection_mu)
          for (int n : g.projection_n)
            for (double t : g.projection_t) pts.push_back({mu, n, t});
        if (g.projection_include_zero) pts.push_back({cplx(0.0, 0.0), 2, 0.5 * kPi});
        run_points(out, pts,
                   [&](const Pt& p) {
                     return verify_projection_identity(MuParameter::broad(p.mu), p.n, p.t,
                                                       cfg.tc, cfg.thresholds);
                   },
                   cfg.exec);
        break;
      }
      case IdentityId::kontorovich_lebedev: {
        struct Pt { int n; double u; };
        std::vector<Pt> pts;
        for (int n : g.kl_n)
          for (double u : g.kl_u) pts.push_back({n, u});
        run_points(out, pts,
                   [&](const Pt& p) {
                     return verify_kl_identity(p.n, p.u, cfg.tc, cfg.thresholds);
                   },
                   cfg.exec);
        break;
      }
      case IdentityId::orthogonality: {
        for (const cplx& mu : g.orthogonality_mu) {
          OrthogonalityResult res =
              verify_orthogonality(MuParameter::strict(mu), g.orthogonality_size, cfg.tc,
                                   cfg.thresholds, cfg.exec);
          for (auto& r : res.reports) out.push_back(std::move(r));
        }
        break;
      }
      case IdentityId::decay_envelope: {
        const DecayBound bound =
            compute_decay_bound(MuParameter::broad(g.decay_mu), g.decay_gamma, cfg.mb);
        run_points(out, g.decay_t,
                   [&](double t) { return verify_decay_envelope(bound, t, cfg.tc); },
                   cfg.exec);
        break;
      }
    }
  }
  return out;
}

}  // namespace mfk
