#include "jcir/charfn.hpp"

#include <cmath>
#include <stdexcept>

#include "jcir/quadrature.hpp"

namespace jcir {

namespace {

void require_horizon(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("horizon t must be >= 0 and finite");
  }
}

// 1 - (sigma^2/2a) u (1 - e^{-at}); real part >= 1 whenever Re u <= 0.
Complex denom(Complex u, double one_minus_decay, const JcirParams& p) {
  const double gamma = p.sigma2() / (2.0 * p.a);
  return 1.0 - gamma * u * one_minus_decay;
}

Complex psi_raw(double t, Complex u, const JcirParams& p) {
  const double decay = std::exp(-p.a * t);
  return u * decay / denom(u, 1.0 - decay, p);
}

// integral (e^{w xi} - 1) nu(dxi): the jump term of F.
Complex jump_transform_term(const LevyMeasure& nu, Complex w, double tol) {
  switch (nu.kind()) {
    case LevyMeasure::Kind::Zero:
      return Complex{0.0, 0.0};
    case LevyMeasure::Kind::PointMasses: {
      Complex sum{0.0, 0.0};
      for (const auto& pm : nu.points()) {
        sum += pm.weight * (std::exp(w * pm.xi) - 1.0);
      }
      return sum;
    }
    case LevyMeasure::Kind::FiniteActivity:
      if (nu.jump_density().mgf) {
        return nu.rate() * (nu.jump_density().mgf(w) - 1.0);
      }
      [[fallthrough]];
    case LevyMeasure::Kind::InfiniteActivity:
    default:
      return nu.integral_complex(
          [w](double xi) { return std::exp(w * xi) - 1.0; }, tol);
  }
}

// Time integral of the exponential-marks jump term, in closed form.
// decay = e^{-at}; 0 selects the stationary limit.  With
//   A = eta - u,  w = u (1 - decay) / A,  delta = eta sigma^2 / 2a - 1,
// the exponent is -(c / (a delta)) log(1 - delta w); the log argument
// never leaves the right half-plane for Re u <= 0.
Complex exp_marks_exponent(Complex u, double decay, const JcirParams& p,
                           double c, double eta) {
  const double gamma = p.sigma2() / (2.0 * p.a);
  const Complex A = eta - u;
  const Complex w = u * (1.0 - decay) / A;
  const double delta = eta * gamma - 1.0;
  const Complex z = delta * w;
  if (std::abs(z) < 1e-6) {
    // -log(1-z)/delta = w (1 + z/2 + z^2/3 + z^3/4 + O(z^4))
    return (c / p.a) * w * (1.0 + z * (0.5 + z * (1.0 / 3.0 + z * 0.25)));
  }
  const Complex B = eta - u * decay - eta * gamma * u * (1.0 - decay);
  return (c / (p.a * delta)) * (std::log(A) - std::log(B));
}

bool has_exponential_marks(const LevyMeasure& nu) {
  return nu.kind() == LevyMeasure::Kind::FiniteActivity &&
         nu.jump_density().exponential_rate > 0.0;
}

}  // namespace

FrequencyPoint::FrequencyPoint(Complex u) : u_(u) {
  if (!(u.real() <= 0.0) || !std::isfinite(u.real()) ||
      !std::isfinite(u.imag())) {
    throw std::invalid_argument(
        "FrequencyPoint: argument must be finite with Re u <= 0");
  }
}

Complex psi(double t, FrequencyPoint u, const JcirParams& p) {
  require_horizon(t);
  return psi_raw(t, u.value(), p);
}

Complex phi_diffusion(double t, FrequencyPoint u, const JcirParams& p) {
  require_horizon(t);
  const double decay = std::exp(-p.a * t);
  const double exponent = 2.0 * p.a * p.theta / p.sigma2();
  return -exponent * std::log(denom(u.value(), 1.0 - decay, p));
}

Complex phi_jump(double t, FrequencyPoint u, const JcirParams& p,
                 double quad_tol) {
  require_horizon(t);
  const LevyMeasure& nu = p.nu;
  if (nu.is_zero() || t == 0.0) return Complex{0.0, 0.0};
  if (has_exponential_marks(nu)) {
    return exp_marks_exponent(u.value(), std::exp(-p.a * t), p, nu.rate(),
                              nu.jump_density().exponential_rate);
  }
  const Complex uv = u.value();
  auto integrand = [&](double s) -> Complex {
    return jump_transform_term(nu, psi_raw(s, uv, p), quad_tol);
  };
  return quad::integrate_or_throw<Complex>(integrand, 0.0, t, quad_tol,
                                           "phi_jump");
}

Complex phi(double t, FrequencyPoint u, const JcirParams& p, double quad_tol) {
  return phi_diffusion(t, u, p) + phi_jump(t, u, p, quad_tol);
}

Complex cir_cf(double t, double x, FrequencyPoint u, const JcirParams& p) {
  if (!(x >= 0.0)) {
    throw std::invalid_argument("cir_cf: start value must be >= 0");
  }
  return std::exp(phi_diffusion(t, u, p) + x * psi(t, u, p));
}

Complex z_cf(double t, FrequencyPoint u, const JcirParams& p,
             double quad_tol) {
  return std::exp(phi_jump(t, u, p, quad_tol));
}

CfValue jcir_cf(double t, double x, FrequencyPoint u, const JcirParams& p,
                double quad_tol) {
  if (!(x >= 0.0)) {
    throw std::invalid_argument("jcir_cf: start value must be >= 0");
  }
  const Complex psi_v = psi(t, u, p);
  const Complex phi_d = phi_diffusion(t, u, p);
  const Complex phi_j = phi_jump(t, u, p, quad_tol);
  return CfValue{std::exp(phi_d + x * psi_v) * std::exp(phi_j),
                 phi_d + phi_j, psi_v};
}

Complex riccati_f(Complex w, const JcirParams& p, double quad_tol) {
  return p.a * p.theta * w + jump_transform_term(p.nu, w, quad_tol);
}

Complex riccati_r(Complex w, const JcirParams& p) {
  return 0.5 * p.sigma2() * w * w - p.a * w;
}

namespace {

struct OdeState {
  Complex psi;
  Complex phi;
};

OdeState operator+(OdeState a, OdeState b) {
  return {a.psi + b.psi, a.phi + b.phi};
}
OdeState operator*(double c, OdeState y) { return {c * y.psi, c * y.phi}; }

}  // namespace

OdeSolution riccati_oracle(double t, FrequencyPoint u, const JcirParams& p,
                           double rtol, double quad_tol) {
  require_horizon(t);
  OdeState y{u.value(), Complex{0.0, 0.0}};
  if (t == 0.0) return {y.phi, y.psi};

  auto deriv = [&](const OdeState& s) -> OdeState {
    return {riccati_r(s.psi, p), riccati_f(s.psi, p, quad_tol)};
  };

  // Dormand-Prince 5(4) tableau.
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                      a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                      a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                      a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const double e1 = 35.0 / 384 - 5179.0 / 57600,
                      e3 = 500.0 / 1113 - 7571.0 / 16695,
                      e4 = 125.0 / 192 - 393.0 / 640,
                      e5 = -2187.0 / 6784 + 92097.0 / 339200,
                      e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

  const double atol = 1e-14 * std::max(1.0, std::abs(u.value()));
  double s = 0.0;
  double h = t * 1e-3;
  OdeState k1 = deriv(y);
  int evals_left = 2000000;
  while (s < t) {
    if (h > t - s) h = t - s;
    const OdeState k2 = deriv(y + (h * a21) * k1);
    const OdeState k3 = deriv(y + (h * a31) * k1 + (h * a32) * k2);
    const OdeState k4 =
        deriv(y + (h * a41) * k1 + (h * a42) * k2 + (h * a43) * k3);
    const OdeState k5 = deriv(y + (h * a51) * k1 + (h * a52) * k2 +
                              (h * a53) * k3 + (h * a54) * k4);
    const OdeState k6 = deriv(y + (h * a61) * k1 + (h * a62) * k2 +
                              (h * a63) * k3 + (h * a64) * k4 + (h * a65) * k5);
    const OdeState y_new = y + (h * b1) * k1 + (h * b3) * k3 + (h * b4) * k4 +
                           (h * b5) * k5 + (h * b6) * k6;
    const OdeState k7 = deriv(y_new);
    const OdeState err_v = (h * e1) * k1 + (h * e3) * k3 + (h * e4) * k4 +
                           (h * e5) * k5 + (h * e6) * k6 + (h * e7) * k7;
    const double sc_psi =
        atol + rtol * std::max(std::abs(y.psi), std::abs(y_new.psi));
    const double sc_phi =
        atol + rtol * std::max(std::abs(y.phi), std::abs(y_new.phi));
    const double err = std::max(std::abs(err_v.psi) / sc_psi,
                                std::abs(err_v.phi) / sc_phi);
    const double fac =
        std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-16), -0.2)));
    if (err <= 1.0) {
      s += h;
      y = y_new;
      k1 = k7;  // first-same-as-last
    }
    h *= fac;
    if ((evals_left -= 7) <= 0) {
      throw NumericError("riccati_oracle: step budget exhausted");
    }
  }
  return {y.phi, y.psi};
}

Complex invariant_cf(FrequencyPoint u, const JcirParams& p, double quad_tol,
                     double tail_tol) {
  const double gamma = p.sigma2() / (2.0 * p.a);
  const double exponent = 2.0 * p.a * p.theta / p.sigma2();
  const Complex base = std::exp(-exponent * std::log(1.0 - gamma * u.value()));
  const LevyMeasure& nu = p.nu;
  if (nu.is_zero()) return base;
  if (has_exponential_marks(nu)) {
    return base * std::exp(exp_marks_exponent(
                      u.value(), 0.0, p, nu.rate(),
                      nu.jump_density().exponential_rate));
  }
  const Complex uv = u.value();
  auto integrand = [&](double s) -> Complex {
    return jump_transform_term(nu, psi_raw(s, uv, p), quad_tol);
  };
  const ExtendedReal m1 = first_moment(nu, quad_tol);
  if (m1.finite) {
    // |integrand(s)| <= m1 |u| e^{-as}; cut where the envelope tail is
    // below tail_tol.
    const double horizon = std::max(
        1.0, std::log(std::max(1.0, m1.value * std::abs(uv)) / (p.a * tail_tol)) /
                 p.a);
    const Complex integral = quad::integrate_or_throw<Complex>(
        integrand, 0.0, horizon, quad_tol, "invariant_cf");
    return base * std::exp(integral);
  }
  auto tail = quad::integrate_to_inf<Complex>(integrand, 0.0, tail_tol, quad_tol);
  if (!tail.converged) {
    throw NumericError("invariant_cf: time integral did not settle");
  }
  return base * std::exp(tail.value);
}

}  // namespace jcir
