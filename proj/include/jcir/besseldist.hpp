#pragma once

#include "jcir/charfn.hpp"
#include "jcir/model.hpp"

namespace jcir {

class Rng;

// Parameter pair of the jump-mark mixture component: an atom of mass
// e^{-alpha} at zero plus a continuous density on (0, inf).  When built from
// an elapsed time s and a jump size xi,
//   alpha = 2 a xi / (sigma^2 (e^{as} - 1)),
//   beta  = 2 a e^{as} / (sigma^2 (e^{as} - 1)),
// so beta > 2a / sigma^2 always.
struct BesselParams {
  double alpha;
  double beta;
  BesselParams(double alpha_, double beta_);
};

BesselParams bessel_from_time_jump(double s, double xi, const JcirParams& p);

// Mass of the atom at zero: e^{-alpha}.
double bessel_atom_mass(const BesselParams& bp);

// Continuous-part density  beta e^{-alpha-beta x} sqrt(alpha/(beta x)) I_1(2 sqrt(alpha beta x)).
// Integrates to 1 - e^{-alpha}; at x = 0 returns the finite limit
// alpha beta e^{-alpha}.
double bessel_pdf_continuous(const BesselParams& bp, double x);

// Transform exp(alpha u / (beta - u)); beta - u stays in the right
// half-plane for Re u <= 0.
Complex bessel_cf(const BesselParams& bp, FrequencyPoint u);

double bessel_mean(const BesselParams& bp);  // alpha / beta

// Exact draw via the compound-Poisson identity: N ~ Poisson(alpha), then a
// Gamma(N, 1/beta) sum of exponential summands; N = 0 gives exactly 0.
double bessel_sample(const BesselParams& bp, Rng& rng);

// Draw conditioned on being nonzero (N >= 1); law is the continuous part
// normalized by 1 - e^{-alpha}.
double bessel_sample_conditional_nonzero(const BesselParams& bp, Rng& rng);

}  // namespace jcir
