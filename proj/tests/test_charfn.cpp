#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "jcir/charfn.hpp"
#include "jcir/model.hpp"
#include "oracles.hpp"

using namespace jcir;

namespace {
const JcirParams kBase(1.0, 1.0, std::sqrt(2.0));  // gamma = 1

double rel_err(Complex got, Complex want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}
}  // namespace

TEST_CASE("frequency points outside the half-plane are rejected") {
  CHECK_NOTHROW(FrequencyPoint(Complex(0.0, 3.0)));
  CHECK_NOTHROW(FrequencyPoint(Complex(-2.0, 1.0)));
  CHECK_THROWS_AS(FrequencyPoint(Complex(0.1, 0.0)), std::invalid_argument);
}

TEST_CASE("state coefficient: pinned values and boundary behavior") {
  const FrequencyPoint zero(Complex(0.0, 0.0));
  CHECK(psi(1.0, zero, kBase) == Complex(0.0, 0.0));

  const FrequencyPoint mone(Complex(-1.0, 0.0));
  CHECK(psi(0.0, mone, kBase).real() == doctest::Approx(-1.0).epsilon(1e-15));
  // a=1, sigma^2=2, t=ln2: u e^{-t} / (1 - u(1-e^{-t})) = -0.5/1.5
  CHECK(psi(std::log(2.0), mone, kBase).real() ==
        doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("state coefficient composes as a flow in time") {
  const FrequencyPoint u(Complex(-0.7, 2.3));
  for (double s : {0.3, 1.1}) {
    for (double t : {0.4, 2.0}) {
      CAPTURE(s);
      CAPTURE(t);
      const Complex inner = psi(s, u, kBase);
      const Complex composed = psi(t, FrequencyPoint(inner), kBase);
      const Complex direct = psi(t + s, u, kBase);
      CHECK(std::abs(composed - direct) < 1e-12);
    }
  }
}

TEST_CASE("constant exponent: diffusion part pinned value") {
  const FrequencyPoint mone(Complex(-1.0, 0.0));
  CHECK(phi(1.0, FrequencyPoint(Complex(0.0, 0.0)), kBase) ==
        Complex(0.0, 0.0));
  // 2 a theta / sigma^2 = 1, denominator 1.5 at t=ln2
  CHECK(phi(std::log(2.0), mone, kBase).real() ==
        doctest::Approx(-std::log(1.5)).epsilon(1e-14));
}

TEST_CASE("constant exponent: jump part pinned against direct quadrature") {
  // single unit atom, no reversion level, so phi is pure jump contribution
  JcirParams p(1.0, 0.0, std::sqrt(2.0),
               LevyMeasure::point_masses({{1.0, 1.0}}));
  const Complex got = phi(1.0, FrequencyPoint(Complex(-1.0, 0.0)), p);
  CHECK(got.imag() == 0.0);
  CHECK(got.real() ==
        doctest::Approx(-0.374150694721877140437).epsilon(1e-8));

  // same number from a from-scratch one-dimensional Simpson rule
  const double direct = oracle::simpson(
      [](double s) {
        const double ps = -std::exp(-s) / (2.0 - std::exp(-s));
        return std::exp(ps) - 1.0;
      },
      0.0, 1.0, 20000);
  CHECK(got.real() == doctest::Approx(direct).epsilon(1e-9));
}

TEST_CASE("transform basics: unit value at zero, modulus bounded by one") {
  JcirParams p(1.2, 0.8, 1.0,
               LevyMeasure::finite_activity(1.5, exponential_jumps(2.0)));
  const CfValue at0 = jcir_cf(1.0, 2.0, FrequencyPoint(Complex(0, 0)), p);
  CHECK(std::abs(at0.value - Complex(1.0, 0.0)) < 1e-14);

  for (int k = 0; k < 1000; ++k) {
    const double v = -50.0 + 100.0 * k / 999.0;
    const CfValue c = jcir_cf(0.7, 1.3, FrequencyPoint(Complex(0.0, v)), p);
    CHECK(std::abs(c.value) <= 1.0 + 1e-12);
  }
}

TEST_CASE("transform respects conjugate symmetry on the imaginary axis") {
  JcirParams p(1.0, 0.5, 1.0,
               LevyMeasure::point_masses({{0.5, 1.0}, {2.0, 0.3}}));
  for (double v : {0.5, 3.0, 17.0}) {
    CAPTURE(v);
    const Complex plus =
        jcir_cf(1.0, 1.0, FrequencyPoint(Complex(0.0, v)), p).value;
    const Complex minus =
        jcir_cf(1.0, 1.0, FrequencyPoint(Complex(0.0, -v)), p).value;
    CHECK(std::abs(plus - std::conj(minus)) < 1e-12);
  }
}

TEST_CASE("transform factors exactly into diffusion and jump pieces") {
  JcirParams p(0.8, 1.5, 1.1,
               LevyMeasure::finite_activity(2.0, gamma_jumps(2.0, 3.0)));
  const FrequencyPoint u(Complex(-0.4, 5.0));
  const double t = 1.3, x = 2.2;
  const CfValue full = jcir_cf(t, x, u, p);
  const Complex product = cir_cf(t, x, u, p) * z_cf(t, u, p);
  CHECK(rel_err(full.value, product) < 1e-14);
}

TEST_CASE("no-jump transform vs the diffusion-only transform") {
  const FrequencyPoint u(Complex(0.0, 4.0));
  const CfValue full = jcir_cf(0.9, 1.7, u, kBase);
  CHECK(std::abs(full.value - cir_cf(0.9, 1.7, u, kBase)) < 1e-15);
  CHECK(std::abs(z_cf(0.9, u, kBase) - Complex(1.0, 0.0)) < 1e-15);
}

TEST_CASE("ODE route reproduces the closed forms across measure types") {
  std::vector<JcirParams> fixtures;
  fixtures.push_back(kBase);
  fixtures.emplace_back(1.5, 0.7, 0.9,
                        LevyMeasure::point_masses({{0.4, 2.0}, {1.5, 0.5}}));
  fixtures.emplace_back(
      0.6, 1.2, 1.3, LevyMeasure::finite_activity(1.0, exponential_jumps(2.5)));
  fixtures.emplace_back(
      1.0, 0.4, 1.0, LevyMeasure::finite_activity(0.8, gamma_jumps(2.0, 2.0)));
  fixtures.emplace_back(2.0, 1.0, 1.4,
                        LevyMeasure::tempered_stable(0.5, 0.5, 1.0));

  for (std::size_t i = 0; i < fixtures.size(); ++i) {
    const JcirParams& p = fixtures[i];
    for (Complex uv : {Complex(0.0, 3.0), Complex(0.0, -11.0),
                       Complex(-2.0, 0.0), Complex(-1.0, 7.0)}) {
      for (double t : {0.3, 1.7}) {
        CAPTURE(i);
        CAPTURE(uv);
        CAPTURE(t);
        const FrequencyPoint u(uv);
        const OdeSolution ode = riccati_oracle(t, u, p);
        CHECK(rel_err(psi(t, u, p), ode.psi) < 1e-8);
        CHECK(rel_err(phi(t, u, p), ode.phi) < 1e-8);
      }
    }
  }
}

TEST_CASE("ODE route trivial start") {
  const OdeSolution ode =
      riccati_oracle(1.0, FrequencyPoint(Complex(0.0, 0.0)), kBase);
  CHECK(std::abs(ode.phi) < 1e-14);
  CHECK(std::abs(ode.psi) < 1e-14);
}

TEST_CASE("independent RK4 integration agrees with both routes") {
  JcirParams p(1.0, 0.5, 1.0,
               LevyMeasure::finite_activity(1.0, exponential_jumps(2.0)));
  const FrequencyPoint u(Complex(0.0, 2.0));
  const double t = 1.0;
  const auto res = oracle::rk4_phi_psi(
      [&](Complex w) { return riccati_f(w, p); },
      [&](Complex w) { return riccati_r(w, p); }, u.value(), t, 4000);
  CHECK(std::abs(res.psi - psi(t, u, p)) < 1e-9);
  CHECK(std::abs(res.phi - phi(t, u, p)) < 1e-9);
}

TEST_CASE("stationary transform: no-jump case is the gamma law") {
  // gamma = 1, 2 a theta / sigma^2 = 1: (1 - u)^{-1}
  for (Complex uv : {Complex(-1.0, 0.0), Complex(0.0, 2.0), Complex(-0.5, 3.0)}) {
    CAPTURE(uv);
    const Complex want = 1.0 / (1.0 - uv);
    CHECK(std::abs(invariant_cf(FrequencyPoint(uv), kBase) - want) < 1e-10);
  }
  CHECK(std::abs(invariant_cf(FrequencyPoint(Complex(0, 0)), kBase) -
                 Complex(1.0, 0.0)) < 1e-12);
}

TEST_CASE("stationary transform is the long-time transition limit") {
  JcirParams p(1.0, 0.8, 1.0,
               LevyMeasure::finite_activity(1.2, exponential_jumps(3.0)));
  const FrequencyPoint u(Complex(0.0, 1.5));
  const Complex inv = invariant_cf(u, p);
  for (double x : {0.0, 1.0, 10.0}) {
    CAPTURE(x);
    const Complex late = jcir_cf(40.0, x, u, p).value;
    CHECK(std::abs(late - inv) < 1e-6);
  }
}

TEST_CASE("heavy-tailed measures make the exponent integrals fail loudly") {
  // xi^{-2.5} near zero is not integrable against (xi wedge 1)
  auto bad = LevyMeasure::infinite_activity(
      [](double xi) { return std::pow(xi, -2.5) * std::exp(-xi); }, 1e-8,
      "too-singular");
  JcirParams p(1.0, 1.0, 1.0, bad);
  CHECK_THROWS_AS(phi(1.0, FrequencyPoint(Complex(-1.0, 0.0)), p),
                  NumericError);
}
