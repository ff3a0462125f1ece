#pragma once

#include <cstdint>
#include <optional>

#include "jcir/besseldist.hpp"
#include "jcir/model.hpp"

namespace jcir {

class Rng;

// Fixed-horizon summary of the pure-jump component: it is compound Poisson
// with rate lambda_t and mark law rho, so it vanishes with probability
// c_t = e^{-lambda_t} and has mean ((1 - e^{-at})/a) * integral xi nu(dxi).
struct JumpPartSummary {
  double t;
  double lambda_t;
  double c_t;
  double mean_z;
};

// Time integral over (0,t) of the per-jump survival weight 1 - e^{-alpha(s,xi)},
// accumulated against nu.  Finite exactly when the small-jump log moment of nu
// is; divergence throws.
double lambda_of_t(double t, const JcirParams& p, double quad_tol = 1e-10);

// e^{-lambda(t)}: the probability that the jump part is exactly zero, which
// multiplies the diffusion density in the transition lower bound.
double c_lower(double t, const JcirParams& p, double quad_tol = 1e-10);

// ((1 - e^{-at})/a) * integral xi nu(dxi); +inf when the first moment diverges.
double z_mean(double t, const JcirParams& p, double quad_tol = 1e-10);

JumpPartSummary summarize_jump_part(double t, const JcirParams& p,
                                    double quad_tol = 1e-10);

// Draws marks of the compound representation by rejection: propose an
// elapsed time uniform on (0,t) and a jump size from the normalized sampling
// view of nu, accept with probability 1 - e^{-alpha}, then draw the nonzero
// Bessel component.  The long-run acceptance rate is lambda(t) / (t |nu|).
class RhoSampler {
 public:
  RhoSampler(double t, const JcirParams& p);

  double draw(Rng& rng);

  std::uint64_t proposals() const { return proposals_; }
  std::uint64_t accepts() const { return accepts_; }

 private:
  double t_;
  JcirParams p_;
  std::uint64_t proposals_ = 0;
  std::uint64_t accepts_ = 0;
};

double rho_sample(double t, const JcirParams& p, Rng& rng);

// Compound-Poisson draw of the jump part at horizon t: a Poisson(lambda_t)
// count of RhoSampler marks.  Construct once per (t, params) and reuse; the
// rate quadrature runs in the constructor.  A jump-free measure gives the
// constant 0 (lambda = 0, no mark sampler).
class ZSampler {
 public:
  ZSampler(double t, const JcirParams& p, double quad_tol = 1e-10);

  double lambda() const { return lambda_; }
  double draw(Rng& rng);

 private:
  double lambda_;
  std::optional<RhoSampler> rho_;
};

double z_sample(double t, const JcirParams& p, Rng& rng,
                double quad_tol = 1e-10);

}  // namespace jcir
