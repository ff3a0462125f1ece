#pragma once

#include <vector>

#include "jcir/charfn.hpp"
#include "jcir/model.hpp"

namespace jcir {

struct InversionConfig {
  int n_terms = 4096;      // cosine-expansion term count
  double span_l = 12.0;    // support cut at mean + span_l * std
  double tol_mass = 0.01;  // accepted deviation of recovered mass from 1
  double quad_tol = 1e-10;
};

struct DensityGrid {
  double t;
  double x;
  std::vector<double> y_grid;
  std::vector<double> p_values;
  double inv_error_bound;  // estimated magnitude of the dropped cosine tail
};

// Right end of the inversion interval [0, B]: transition mean plus span_l
// standard deviations, both from closed-form moment formulas.  Requires the
// measure's first two moments to be finite.
double cos_span(double t, double x, const JcirParams& p, double span_l = 12.0,
                double quad_tol = 1e-10);

// Uniform grid over the full inversion interval.
std::vector<double> default_y_grid(double t, double x, const JcirParams& p,
                                   int n_points = 512, double span_l = 12.0);

// Grid for bound checking: log-spaced from B*1e-4 (the y=0 endpoint is
// excluded; both densities can be singular there) into 0.1*B, then linear up
// to 0.9*B.
std::vector<double> lower_bound_y_grid(double t, double x,
                                       const JcirParams& p, int n_points = 160,
                                       double span_l = 12.0);

// Cosine-expansion inversion of the transition transform, evaluated at the
// given abscissae.  The recovered mass over [0, B] is checked on an internal
// uniform grid against tol_mass.
DensityGrid density_from_cf(double t, double x,
                            const std::vector<double>& y_grid,
                            const JcirParams& p,
                            const InversionConfig& cfg = {});

struct LowerBoundReport {
  double t;
  double x;
  double lambda_t;
  double c_t;
  std::vector<double> y_grid;
  std::vector<double> p_values;  // inverted transition density
  std::vector<double> f_values;  // diffusion-only density
  std::vector<double> margin;    // p - c_t * f per point
  double min_margin;
  int violations;  // points with margin < -tol
};

// Pointwise check of p(t,x,y) >= c_t * f(t,x,y).  With no jumps the
// transition density IS the diffusion density and c_t = 1, so the margin is
// identically zero by construction.
LowerBoundReport lower_bound_check(double t, double x,
                                   const std::vector<double>& y_grid,
                                   const JcirParams& p, double tol = 1e-6,
                                   const InversionConfig& cfg = {});

}  // namespace jcir
