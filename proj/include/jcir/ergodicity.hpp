#pragma once

#include <cstdint>
#include <vector>

#include "jcir/model.hpp"

namespace jcir {

class Rng;

// Drift constant of V(x) = x: the transition mean obeys
// E[X_t | X_0 = x] <= e^{-at} x + M with M = theta + (1/a) integral xi nu(dxi).
double lyapunov_m(const JcirParams& p, double quad_tol = 1e-10);

struct LyapunovCheck {
  double analytic_mean;  // theta(1-e^{-at}) + x e^{-at} + jump-part mean
  double mc_mean;
  double mc_se;
  double bound;  // e^{-at} x + M
  bool ok;       // analytic <= bound and MC within 4 standard errors
};

LyapunovCheck lyapunov_check(double x, double t, const JcirParams& p, int n_mc,
                             Rng& rng);

struct TvEstimate {
  double value;
  double se;  // multinomial-bootstrap standard error
};

// Histogram estimator of the total-variation distance between two sample
// laws, on a shared binning (Freedman-Diaconis width on the pooled sample;
// n_bins overrides when positive).
TvEstimate tv_distance(const std::vector<double>& sample_a,
                       const std::vector<double>& sample_b, Rng& rng,
                       int n_boot = 200, int n_bins = 0);

struct TvPoint {
  int n;
  double t;
  double tv;
  double se;
};

struct ErgodicStartFit {
  double x0;
  std::vector<TvPoint> series;
  double beta_hat;   // e^{slope} of the log-linear fit
  double intercept;  // fitted log level at n = 0
  double slope_se;   // standard error of the fitted slope
  double r2;
  int n_used;  // points before the noise floor
};

struct ErgodicityReport {
  double delta;
  std::vector<ErgodicStartFit> starts;
  double beta_hat;  // average over starts
  double fit_r2;    // worst fit among starts
  bool lyapunov_ok;
  double m_hat;
};

// Empirical decay-rate fit: simulates skeleton chains from each start,
// estimates TV distance to a long-horizon reference sample at every step,
// and fits log tv against n over the stretch before the estimator noise
// floor (tv < 3 standard errors).
ErgodicityReport ergodic_rate_fit(const std::vector<double>& x_list,
                                  double delta, int n_max,
                                  const JcirParams& p, int n_mc,
                                  std::uint64_t seed);

// Approximate draws from the stationary law: exact transition draws from 0
// over a horizon long enough for the start to be forgotten.
std::vector<double> invariant_sample(const JcirParams& p, double t_ref,
                                     int n_mc, std::uint64_t seed);

}  // namespace jcir
