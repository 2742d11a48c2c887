#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "mfk/gamma.hpp"
#include "mfk/transform.hpp"

using cplx = std::complex<double>;
using mfk::CoefficientSequence;
using mfk::DecayHint;
using mfk::FunctionSpec;
using mfk::MuParameter;
using mfk::QuadratureConfig;
using mfk::SampledFunction;
using mfk::TransformConfig;
using std::numbers::pi;

namespace {

double crel(cplx a, cplx b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

// Outer tolerances well under the 1e-5 recovery targets but far from the
// certifiable floor, to keep the nested integrals quick.
TransformConfig fast_tc() {
  TransformConfig tc;
  tc.quad = QuadratureConfig{1e-9, 1e-8, 2000, 10.0, 0.95};
  tc.kernel_quad = QuadratureConfig{1e-11, 1e-9, 2000, 10.0, 0.95};
  return tc;
}

}  // namespace

TEST_CASE("config and sequence validation") {
  TransformConfig tc;
  tc.n_max = 0;
  CHECK_THROWS_AS(tc.validate(), std::invalid_argument);
  tc = TransformConfig{};
  tc.x_max = 1.0;
  CHECK_THROWS_AS(tc.validate(), std::invalid_argument);
  tc = TransformConfig{};
  tc.quad.abs_tol = -1.0;
  CHECK_THROWS_AS(tc.validate(), std::invalid_argument);
  CHECK_NOTHROW(TransformConfig{}.validate());

  CoefficientSequence a{{cplx(3.0, 4.0), cplx(-2.0, 0.0)}, 0.0};
  CHECK(a.l1_norm() == doctest::Approx(7.0).epsilon(1e-15));
  CHECK_NOTHROW(a.validate());
  a.tail_l1 = -0.5;
  CHECK_THROWS_AS(a.validate(), std::invalid_argument);
}

TEST_CASE("sampled function interpolation, tail, and validation") {
  SampledFunction f;
  f.grid = {1.5, 2.0, 3.0};
  f.values = {cplx(1.0, 0.0), cplx(2.0, 0.0), cplx(4.0, 0.0)};
  f.tail_exponent = 2.0;
  CHECK_NOTHROW(f.validate());
  CHECK(f(1.75).real() == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(f(2.5).real() == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(f(1.2).real() == doctest::Approx(1.0).epsilon(1e-15));  // held constant below
  CHECK(f(6.0).real() == doctest::Approx(1.0).epsilon(1e-14));  // 4 * (6/3)^-2

  SampledFunction bad = f;
  bad.grid = {0.9, 2.0, 3.0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = f;
  bad.grid = {1.5, 1.5, 3.0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = f;
  bad.values.pop_back();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = f;
  bad.tail_exponent = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("integral from one handles weights, cutoffs, and tails") {
  const QuadratureConfig cfg{1e-13, 1e-11, 2000, 10.0, 0.95};
  auto e1 = [](double d) { return cplx(std::exp(-(1.0 + d)), 0.0); };

  auto r = mfk::integrate_from_one(e1, 0.0, DecayHint::exponential(1.0), cfg);
  CHECK(r.converged);
  CHECK(std::abs(r.value.real() - std::exp(-1.0)) < 1e-13);

  r = mfk::integrate_from_one(e1, 0.0, DecayHint::exponential(1.0), cfg, 40.0);
  CHECK(r.converged);
  CHECK(std::abs(r.value.real() - (std::exp(-1.0) - std::exp(-40.0))) < 1e-13);

  r = mfk::integrate_from_one(e1, 0.0, DecayHint::exponential(1.0), cfg, 1.5);
  CHECK(r.converged);
  CHECK(std::abs(r.value.real() - (std::exp(-1.0) - std::exp(-1.5))) < 1e-13);

  // (x-1)^(-1/2) e^(-x) integrates to sqrt(pi)/e
  r = mfk::integrate_from_one(e1, 0.5, DecayHint::exponential(1.0), cfg);
  CHECK(r.converged);
  CHECK(std::abs(r.value.real() - 0.652049332173292183059) < 5e-13);

  // complex power: (x-1)^(-0.3-0.2i) e^(-x) integrates to e^-1 Gamma(0.7-0.2i)
  r = mfk::integrate_from_one(e1, cplx(0.3, 0.2), DecayHint::exponential(1.0), cfg);
  CHECK(r.converged);
  CHECK(std::abs(r.value - cplx(0.439448723444982638359, 0.105581427357439806939)) < 1e-12);

  // algebraic tail: x^-2 integrates to 1
  auto inv_sq = [](double d) { return cplx(1.0 / ((1.0 + d) * (1.0 + d)), 0.0); };
  r = mfk::integrate_from_one(inv_sq, 0.0, DecayHint::algebraic(2.0), cfg);
  CHECK(r.converged);
  CHECK(std::abs(r.value.real() - 1.0) < 1e-12);

  CHECK_THROWS_AS(mfk::integrate_from_one(e1, 0.0, DecayHint::exponential(1.0), cfg, 1.0),
                  std::invalid_argument);
}

TEST_CASE("forward series: unit sequence is exactly one kernel") {
  const TransformConfig tc;
  const auto mu = MuParameter::broad(0.25);
  CoefficientSequence a{{cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0)}, 0.0};
  const auto F = mfk::forward_series(a, mu, 2.0, tc);
  const cplx k = mfk::conical_kernel(mu, 1.0, 2.0, mfk::KernelRoute::automatic, tc.kernel_quad);
  CHECK(F.value == k);
  CHECK(F.tail_bound == 0.0);

  const auto zero = mfk::forward_series(CoefficientSequence{}, mu, 2.0, tc);
  CHECK(zero.value == cplx(0.0, 0.0));
  CHECK(zero.tail_bound == 0.0);

  CHECK_THROWS_AS(mfk::forward_series(a, mu, 1.0, tc), std::domain_error);
}

TEST_CASE("forward series: declared residual mass produces the envelope bound") {
  const TransformConfig tc;
  const auto mu0 = MuParameter::broad(0.0);
  CoefficientSequence a{{cplx(0.5, 0.0)}, std::pow(2.0, -8)};
  const auto F = mfk::forward_series(a, mu0, 2.0, tc);
  const double env = std::abs(
      mfk::conical_kernel(mu0, 0.0, 2.0, mfk::KernelRoute::automatic, tc.kernel_quad));
  CHECK(F.tail_bound == doctest::Approx(env * std::pow(2.0, -8)).epsilon(1e-14));
}

TEST_CASE("forward series truncation error obeys the envelope law") {
  // partial sums of a_m = 2^-m: the residual beyond M is bounded by the
  // tau = 0 kernel times the residual mass
  const TransformConfig tc;
  const auto mu = MuParameter::broad(0.25);
  const double x = 2.0;
  std::vector<cplx> terms;
  for (int m = 1; m <= 8; ++m)
    terms.push_back(std::pow(2.0, -m) * mfk::conical_kernel(mu, m, x,
                                                            mfk::KernelRoute::automatic,
                                                            tc.kernel_quad));
  const double env =
      std::abs(mfk::conical_kernel(mu, 0.0, x, mfk::KernelRoute::automatic, tc.kernel_quad));
  for (int cut : {2, 4, 6}) {
    cplx rest = 0.0;
    for (int m = cut + 1; m <= 8; ++m) rest += terms[m - 1];
    CHECK(std::abs(rest) <= env * std::pow(2.0, -cut));
  }
}

TEST_CASE("forward series scales exactly with the coefficients") {
  const TransformConfig tc;
  const auto mu = MuParameter::broad(-0.3);
  CoefficientSequence a{{cplx(0.7, 0.1), cplx(-0.2, 0.0)}, 0.0};
  CoefficientSequence b = a;
  for (auto& v : b.values) v *= 2.0;
  const auto Fa = mfk::forward_series(a, mu, 3.0, tc);
  const auto Fb = mfk::forward_series(b, mu, 3.0, tc);
  CHECK(Fb.value == 2.0 * Fa.value);
}

TEST_CASE("represented function from trigonometric data matches frozen references") {
  const TransformConfig tc;
  FunctionSpec spec;
  spec.sine_coeffs = {cplx(1.0, 0.0)};
  spec.mu = MuParameter::broad(0.0);
  const cplx f0 = mfk::evaluate_f_from_spec(spec, 2.0, tc);
  CHECK(std::abs(f0 - cplx(0.853767873838897280968, 0.0)) < 5e-12);
  CHECK(f0.imag() == 0.0);

  spec.mu = MuParameter::broad(cplx(0.2, 0.1));
  const cplx fc = mfk::evaluate_f_from_spec(spec, 2.0, tc);
  CHECK(std::abs(fc - cplx(1.05850402208627256359, 0.119102276583920441884)) < 5e-12);

  CHECK_THROWS_AS(mfk::evaluate_f_from_spec(spec, 1.0, tc), std::domain_error);
}

TEST_CASE("only the odd part of the boundary data contributes") {
  const TransformConfig tc;
  FunctionSpec odd;
  odd.sine_coeffs = {cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(0.25, 0.0)};
  odd.mu = MuParameter::broad(-0.2);
  FunctionSpec mixed = odd;
  mixed.cosine_coeffs = {cplx(0.7, 0.0), cplx(-0.3, 0.0)};
  mixed.constant = cplx(2.5, 0.0);
  const cplx fo = mfk::evaluate_f_from_spec(odd, 1.7, tc);
  const cplx fm = mfk::evaluate_f_from_spec(mixed, 1.7, tc);
  CHECK(std::abs(fo - fm) < 1e-10);

  FunctionSpec zero;
  zero.mu = MuParameter::broad(0.0);
  CHECK(mfk::evaluate_f_from_spec(zero, 2.0, tc) == cplx(0.0, 0.0));
}

TEST_CASE("closed-form coefficients: value, support, linearity") {
  FunctionSpec spec;
  spec.sine_coeffs = {cplx(0.0, 0.0), cplx(1.0, 0.0)};  // sin(2u)
  spec.mu = MuParameter::broad(0.0);
  CHECK(spec.degree() == 2);
  const cplx c2 = mfk::coefficients_from_psi(spec, 2);
  CHECK(crel(c2, cplx(0.03318743353871577343, 0.0)) < 1e-14);
  CHECK(c2.imag() == 0.0);
  CHECK(mfk::coefficients_from_psi(spec, 1) == cplx(0.0, 0.0));
  CHECK(mfk::coefficients_from_psi(spec, 3) == cplx(0.0, 0.0));
  CHECK(mfk::coefficients_from_psi(spec, 12) == cplx(0.0, 0.0));

  FunctionSpec scaled = spec;
  scaled.sine_coeffs[1] = cplx(2.5, 0.0);
  CHECK(crel(mfk::coefficients_from_psi(scaled, 2), 2.5 * c2) < 1e-15);

  CHECK_THROWS_AS(mfk::coefficients_from_psi(spec, 0), std::domain_error);
}

TEST_CASE("projection integral agrees with the closed form") {
  TransformConfig tc = fast_tc();
  for (const double mur : {0.0, 0.25}) {
    FunctionSpec spec;
    spec.sine_coeffs = {cplx(0.0, 0.0), cplx(1.0, 0.0)};  // sin(2u)
    spec.mu = MuParameter::broad(mur);
    for (int n : {1, 2, 3}) {
      const auto quad = mfk::project_spec_function(spec, n, tc);
      CHECK(quad.converged);
      const cplx closed = mfk::coefficients_from_psi(spec, n);
      CHECK(std::abs(quad.value - closed) < 1e-6);
    }
  }
}

TEST_CASE("expansion from trigonometric data reproduces the function") {
  TransformConfig tc = fast_tc();
  FunctionSpec spec;
  spec.sine_coeffs = {cplx(0.0, 0.0), cplx(1.0, 0.0)};
  spec.mu = MuParameter::broad(0.0);
  const cplx rebuilt = mfk::expand_function_incomplete(spec, 2.0, tc);
  const cplx direct = mfk::evaluate_f_from_spec(spec, 2.0, tc);
  CHECK(std::abs(rebuilt - direct) < 1e-6);

  TransformConfig low = tc;
  low.n_max = 1;  // below the sine degree
  CHECK_THROWS_AS(mfk::expand_function_incomplete(spec, 2.0, low), std::invalid_argument);

  FunctionSpec zero;
  zero.mu = MuParameter::broad(0.3);
  CHECK(mfk::expand_function_incomplete(zero, 2.0, tc) == cplx(0.0, 0.0));
}

TEST_CASE("inversion prefactor reduces to n tanh(pi n) at mu zero") {
  const auto mu0 = MuParameter::broad(0.0);
  for (int n = 1; n <= 6; ++n) {
    const cplx p = mfk::inversion_prefactor(mu0, n);
    CHECK(crel(p, cplx(n * std::tanh(pi * n), 0.0)) < 1e-13);
    CHECK(p.imag() == 0.0);
  }
  CHECK_THROWS_AS(mfk::inversion_prefactor(mu0, 0), std::domain_error);
}

TEST_CASE("coefficient recovery: zero input, unit sequence, batch consistency") {
  TransformConfig tc = fast_tc();
  const auto mu0 = MuParameter::broad(0.0);

  auto zero_f = [](double) { return cplx(0.0, 0.0); };
  const auto z = mfk::inverse_coefficients(zero_f, 0.25, mu0, 3, tc);
  CHECK(z.converged);
  CHECK(z.value == cplx(0.0, 0.0));

  // F synthesized from a = (1): recover a_1 = 1, a_2 = 0
  auto F = [&tc, mu0](double x) {
    return mfk::conical_kernel(mu0, 1.0, x, mfk::KernelRoute::automatic, tc.kernel_quad);
  };
  const auto batch = mfk::inverse_coefficients_batch(F, 0.25, mu0, 2, tc);
  REQUIRE(batch.size() == 2);
  CHECK(batch[0].converged);
  CHECK(batch[1].converged);
  CHECK(std::abs(batch[0].value - cplx(1.0, 0.0)) < 1e-5);
  CHECK(std::abs(batch[1].value) < 1e-5);

  // batch equals individual calls, and serial equals parallel, bitwise
  const auto serial = mfk::inverse_coefficients_batch(F, 0.25, mu0, 2, tc, mfk::Exec::serial);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(batch[i].value == serial[i].value);
    CHECK(batch[i].error_estimate == serial[i].error_estimate);
  }
  const auto single = mfk::inverse_coefficients(F, 0.25, mu0, 1, tc);
  CHECK(single.value == batch[0].value);

  CHECK_THROWS_AS(mfk::inverse_coefficients(F, 0.25, mu0, 0, tc), std::domain_error);
  CHECK_THROWS_AS(mfk::inverse_coefficients(F, -1.0, mu0, 1, tc), std::domain_error);
}

TEST_CASE("coefficient recovery from a sampled table") {
  TransformConfig tc = fast_tc();
  const auto mu0 = MuParameter::broad(0.0);
  SampledFunction tab;
  const int count = 2400;
  const double lo = 1.0 + 1e-5, hi = 4e4;
  const double step = std::log((hi - 1.0) / (lo - 1.0)) / (count - 1);
  for (int i = 0; i < count; ++i) {
    const double x = 1.0 + (lo - 1.0) * std::exp(step * i);
    tab.grid.push_back(x);
    tab.values.push_back(
        mfk::conical_kernel(mu0, 1.0, x, mfk::KernelRoute::automatic, tc.kernel_quad));
  }
  tab.tail_exponent = 0.25;
  const auto direct = mfk::inverse_coefficients(
      [&tc, mu0](double x) {
        return mfk::conical_kernel(mu0, 1.0, x, mfk::KernelRoute::automatic, tc.kernel_quad);
      },
      0.25, mu0, 1, tc);
  // the interpolant is piecewise linear, so the outer quadrature cannot go
  // much below the interpolation error; ask only for what the table supports
  TransformConfig loose = tc;
  loose.quad = QuadratureConfig{1e-6, 1e-5, 2000, 10.0, 0.95};
  const auto tabbed = mfk::inverse_coefficients(tab, mu0, 1, loose);
  CHECK(tabbed.converged);
  CHECK(std::abs(tabbed.value - direct.value) < 1e-3);  // interpolation-limited
}

TEST_CASE("coefficient recovery is linear in the function") {
  TransformConfig tc = fast_tc();
  tc.quad = QuadratureConfig{1e-8, 1e-7, 2000, 10.0, 0.95};
  const auto mu = MuParameter::broad(0.25);
  auto F = [&tc, mu](double x) {
    return mfk::conical_kernel(mu, 2.0, x, mfk::KernelRoute::automatic, tc.kernel_quad);
  };
  auto F2 = [&F](double x) { return 2.0 * F(x); };
  const auto a = mfk::inverse_coefficients(F, 0.25, mu, 2, tc);
  const auto b = mfk::inverse_coefficients(F2, 0.25, mu, 2, tc);
  CHECK(crel(b.value, 2.0 * a.value) < 1e-7);
}

TEST_CASE("dual recovery swaps the kernel roles") {
  TransformConfig tc = fast_tc();
  const auto mu0 = MuParameter::strict(0.0);
  CoefficientSequence a{{cplx(0.0, 0.0), cplx(1.0, 0.0), cplx(0.0, 0.0)}, 0.0};
  const auto a2 = mfk::dual_inverse_coefficients(a, mu0, 2, tc);
  CHECK(a2.converged);
  CHECK(std::abs(a2.value - cplx(1.0, 0.0)) < 1e-5);
  const auto a1 = mfk::dual_inverse_coefficients(a, mu0, 1, tc);
  CHECK(std::abs(a1.value) < 1e-5);

  // evaluator overload sees the same inner series
  const auto G = mfk::dual_series(a, mu0, tc);
  const auto via_eval = mfk::dual_inverse_coefficients(G, mu0, 2, tc);
  CHECK(via_eval.value == a2.value);

  // zero sequence recovers zero exactly
  const auto z = mfk::dual_inverse_coefficients(CoefficientSequence{{cplx(0.0, 0.0)}, 0.0},
                                                mu0, 1, tc);
  CHECK(z.value == cplx(0.0, 0.0));

  // the dual route requires the strict regime
  const auto wide = MuParameter::broad(-0.7);
  CHECK_THROWS_AS(mfk::dual_inverse_coefficients(a, wide, 1, tc), std::domain_error);
}

TEST_CASE("two-stage expansion from coefficients") {
  TransformConfig tc = fast_tc();
  const auto mu0 = MuParameter::strict(0.0);
  CoefficientSequence a{{cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0)}, 0.0};
  const auto ce = mfk::expand_complete_coefficients(a, mu0, tc);
  REQUIRE(ce.d.size() == 3);
  CHECK(ce.converged);
  CHECK(std::abs(ce.d[0] - ce.d_closed_form[0]) < 1e-6);
  CHECK(ce.d_closed_form[1] == cplx(0.0, 0.0));
  CHECK(std::abs(ce.d[1]) < 1e-6);
  CHECK(std::abs(ce.d[2]) < 1e-6);

  const cplx rebuilt = mfk::evaluate_complete_expansion(ce, mu0, 2.0, tc);
  const cplx direct = mfk::forward_series(a, mu0, 2.0, tc).value;
  CHECK(std::abs(rebuilt - direct) < 1e-5);

  CHECK_THROWS_AS(mfk::expand_complete_coefficients(CoefficientSequence{}, mu0, tc),
                  std::domain_error);
}
