#pragma once

#include "jcir/model.hpp"

namespace jcir {

class Rng;

// Constants of the diffusion transition density at horizon t:
//   kappa = 2a / (sigma^2 (1 - e^{-at})),  q = 2 a theta / sigma^2 - 1,
// with u = kappa x e^{-at} and v = kappa y the density arguments.
struct CirGridConstants {
  double kappa;
  double q;
  double decay;  // e^{-at}
  double u(double x) const { return kappa * x * decay; }
  double v(double y) const { return kappa * y; }
};

CirGridConstants grid_constants(double t, const JcirParams& p);

// Modified Bessel function of the first kind in split form:
//   I_q(r) = value * e^{exponent},
// so extreme magnitudes never overflow.  Power-series branch below r_switch
// (scaled by its largest term), large-argument asymptotic expansion above.
// The asymptotic branch is only trusted for moderate orders; large q falls
// back to the series, which converges for every argument.
struct ScaledBessel {
  double value;
  double exponent;
  double unscaled() const { return value * std::exp(exponent); }
};

ScaledBessel bessel_iq(double q, double r, double r_switch = 50.0);

// Transition density of the diffusion part started at x, horizon t.
// Uses the x = 0 limiting branch (normalization constant kappa) when x == 0;
// at y == 0 returns 0 / the finite limit / +inf according to sign(q).
double cir_density(double t, double x, double y, const JcirParams& p);

// Exact transition sampling: Poisson-mixed central gamma, valid for every
// theta >= 0 including the degenerate theta = 0 case.
double cir_sample(double t, double x, const JcirParams& p, Rng& rng);

// First two moments of the diffusion transition (no jumps).
double cir_mean(double t, double x, const JcirParams& p);
double cir_variance(double t, double x, const JcirParams& p);

}  // namespace jcir
