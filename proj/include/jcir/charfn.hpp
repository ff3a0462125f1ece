#pragma once

#include "jcir/model.hpp"

namespace jcir {

// Frequency argument of the transform formulas.  Everything in this module
// is valid on the closed half-plane Re u <= 0, where the formulas are
// branch-safe; construction rejects anything outside it.
class FrequencyPoint {
 public:
  explicit FrequencyPoint(Complex u);
  Complex value() const { return u_; }

 private:
  Complex u_;
};

// State coefficient of the log-transform:
//   psi(t,u) = u e^{-at} / (1 - (sigma^2/2a) u (1 - e^{-at})).
// The denominator has real part >= 1 on the half-plane, and psi maps the
// half-plane into itself.
Complex psi(double t, FrequencyPoint u, const JcirParams& p);

// Diffusion contribution to the constant exponent:
//   -(2 a theta / sigma^2) log(1 - (sigma^2/2a) u (1 - e^{-at})).
Complex phi_diffusion(double t, FrequencyPoint u, const JcirParams& p);

// Jump contribution: the time integral over (0,t) of
// integral (e^{xi psi(s,u)} - 1) nu(dxi).  Exponential jump marks evaluate
// in closed form; point masses and general densities go through quadrature
// (using the stored mgf for the inner integral when one is available).
Complex phi_jump(double t, FrequencyPoint u, const JcirParams& p,
                 double quad_tol = 1e-10);

// phi = phi_diffusion + phi_jump.
Complex phi(double t, FrequencyPoint u, const JcirParams& p,
            double quad_tol = 1e-10);

// Transform of the diffusion transition alone: exp(phi_diffusion + x psi).
Complex cir_cf(double t, double x, FrequencyPoint u, const JcirParams& p);

// Transform of the accumulated jump part: exp(phi_jump).
Complex z_cf(double t, FrequencyPoint u, const JcirParams& p,
             double quad_tol = 1e-10);

struct CfValue {
  Complex value;  // exp(phi + x psi); equals cir_cf * z_cf by construction
  Complex phi;
  Complex psi;
};

// Transform of the full transition started at x.
CfValue jcir_cf(double t, double x, FrequencyPoint u, const JcirParams& p,
                double quad_tol = 1e-10);

// The two sides of the generalized Riccati pair:
//   F(w) = a theta w + integral (e^{w xi} - 1) nu(dxi)
//   R(w) = (sigma^2/2) w^2 - a w
// for Re w <= 0.
Complex riccati_f(Complex w, const JcirParams& p, double quad_tol = 1e-10);
Complex riccati_r(Complex w, const JcirParams& p);

struct OdeSolution {
  Complex phi;
  Complex psi;
};

// Independent route to (phi, psi): adaptive Dormand-Prince RK45 on
//   d psi/dt = R(psi),  d phi/dt = F(psi),  psi(0) = u,  phi(0) = 0.
// Shares no time-dependence code with psi()/phi(); exists so the closed
// forms can be validated against it.
OdeSolution riccati_oracle(double t, FrequencyPoint u, const JcirParams& p,
                           double rtol = 1e-12, double quad_tol = 1e-10);

// Transform of the stationary law: the t -> inf limit
//   (1 - (sigma^2/2a) u)^{-2 a theta / sigma^2} *
//   exp( integral_0^inf [integral (e^{xi psi(s,u)} - 1) nu(dxi)] ds ).
// The time integral is truncated where the integrand's envelope drops below
// tail_tol (the integrand decays like e^{-as}).
Complex invariant_cf(FrequencyPoint u, const JcirParams& p,
                     double quad_tol = 1e-10, double tail_tol = 1e-13);

}  // namespace jcir
