#pragma once

#include <cstdint>
#include <vector>

#include "jcir/charfn.hpp"
#include "jcir/jumppart.hpp"
#include "jcir/model.hpp"

namespace jcir {

class Rng;

struct PathConfig {
  double x0;
  double horizon;
  double dt;
  std::uint64_t seed;

  PathConfig(double x0_, double horizon_, double dt_, std::uint64_t seed_);
};

struct PathPoint {
  double time;
  double state;
};

// Discrete observations eta_n = X at times n * delta, started at states[0].
struct SkeletonChain {
  double delta;
  std::vector<double> states;
};

// One exact draw of the full transition at horizon t: the diffusion part and
// the jump part are independent, so their samples add.
double exact_marginal_sample(double t, double x, const JcirParams& p,
                             Rng& rng);

// Reusable form: the jump-rate quadrature runs once in the constructor, so
// repeated draws at the same horizon are cheap.
class ExactSampler {
 public:
  ExactSampler(double t, const JcirParams& p, double quad_tol = 1e-10);

  double draw(double x, Rng& rng);
  double horizon() const { return t_; }
  double lambda() const { return z_.lambda(); }

 private:
  double t_;
  JcirParams p_;
  ZSampler z_;
};

// Full-truncation Euler path: drift and diffusion coefficients read the
// positive part of the state, the raw (possibly negative) state is recorded.
// Jump increments are compound-Poisson per step from the measure's sampling
// view.  The path's randomness comes from the stream (seed, path_index).
std::vector<PathPoint> euler_path(const PathConfig& cfg, const JcirParams& p,
                                  std::uint64_t path_index = 0);

// Terminal state of the same path without storing it.
double euler_terminal(const PathConfig& cfg, const JcirParams& p,
                      std::uint64_t path_index = 0);

SkeletonChain skeleton_chain(double x, double delta, int n_steps,
                             const JcirParams& p, Rng& rng);

struct McCf {
  Complex value;
  double se_re;
  double se_im;
};

// Empirical transform (1/N) sum of e^{u x_j} with component standard errors
// (the jackknife value, which for a mean reduces to sd/sqrt(N)).
McCf mc_cf(const std::vector<double>& samples, FrequencyPoint u);

}  // namespace jcir
