#include "jcir/jumppart.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "jcir/quadrature.hpp"
#include "jcir/rng.hpp"

namespace jcir {

namespace {

void require_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("horizon t must be positive and finite");
  }
}

// Time weight M_t(xi) = integral over s in (0,t) of 1 - e^{-alpha(s,xi)}.
// Substituting y = alpha(s,xi) = 2 a xi / (sigma^2 (e^{as}-1)) turns it into
//   integral over y in [alpha(t,xi), inf) of (1-e^{-y}) 2 xi / (2 a xi y + sigma^2 y^2),
// bounded near s = 0 where alpha blows up; a further y = e^w substitution
// makes the integrand smooth on both flanks of its bump.
double mark_time_weight(double t, double xi, const JcirParams& p,
                        double quad_tol) {
  const double s2 = p.sigma2();
  const double y_t = 2.0 * p.a * xi / (s2 * std::expm1(p.a * t));
  auto g = [&](double w) -> double {
    const double y = std::exp(w);
    return -std::expm1(-y) * 2.0 * xi / (2.0 * p.a * xi + s2 * y);
  };
  const double w_lo = std::log(y_t);
  // Right of w_mid the integrand decays like e^{-w}; left of it the bump
  // region is a plain bounded integral.
  const double w_mid =
      std::max(w_lo, std::max(0.0, std::log(2.0 * p.a * xi / s2)) + 2.0);
  double value = 0.0;
  if (w_mid > w_lo) {
    value += quad::integrate_or_throw<double>(g, w_lo, w_mid, quad_tol,
                                              "lambda_of_t inner");
  }
  auto tail = quad::integrate_to_inf<double>(g, w_mid, quad_tol, quad_tol);
  if (!tail.converged) {
    throw NumericError("lambda_of_t: time-weight tail did not converge");
  }
  return value + tail.value;
}

}  // namespace

double lambda_of_t(double t, const JcirParams& p, double quad_tol) {
  require_time(t);
  const LevyMeasure& nu = p.nu;
  if (nu.is_zero()) return 0.0;
  auto weight = [&](double xi) {
    return mark_time_weight(t, xi, p, quad_tol);
  };
  const ExtendedReal small = nu.integral_small(weight, quad_tol);
  const ExtendedReal tail = nu.integral_tail(weight, quad_tol);
  if (!small.finite || !tail.finite) {
    throw NumericError(
        "lambda_of_t: rate integral diverges; the measure violates the "
        "small-jump log-moment hypothesis");
  }
  return small.value + tail.value;
}

double c_lower(double t, const JcirParams& p, double quad_tol) {
  return std::exp(-lambda_of_t(t, p, quad_tol));
}

double z_mean(double t, const JcirParams& p, double quad_tol) {
  require_time(t);
  const ExtendedReal m1 = first_moment(p.nu, quad_tol);
  const double factor = -std::expm1(-p.a * t) / p.a;
  if (!m1.finite) return std::numeric_limits<double>::infinity();
  return factor * m1.value;
}

JumpPartSummary summarize_jump_part(double t, const JcirParams& p,
                                    double quad_tol) {
  const double lambda = lambda_of_t(t, p, quad_tol);
  return {t, lambda, std::exp(-lambda), z_mean(t, p, quad_tol)};
}

RhoSampler::RhoSampler(double t, const JcirParams& p) : t_(t), p_(p) {
  require_time(t);
  if (p_.nu.is_zero()) {
    throw std::invalid_argument(
        "RhoSampler: measure has no jumps, the distribution is undefined");
  }
  p_.nu.sampling_view();  // build the cache up front
}

double RhoSampler::draw(Rng& rng) {
  const JumpSampler& view = p_.nu.sampling_view();
  for (std::uint64_t k = 0; k < 10000000; ++k) {
    ++proposals_;
    const double s = t_ * uniform01(rng);
    const double xi = view.draw(rng);
    const BesselParams bp = bessel_from_time_jump(s, xi, p_);
    if (uniform01(rng) < -std::expm1(-bp.alpha)) {
      ++accepts_;
      return bessel_sample_conditional_nonzero(bp, rng);
    }
  }
  throw NumericError(
      "rho draw: acceptance probability below 1e-6; review the jump measure "
      "and horizon");
}

double rho_sample(double t, const JcirParams& p, Rng& rng) {
  RhoSampler sampler(t, p);
  return sampler.draw(rng);
}

ZSampler::ZSampler(double t, const JcirParams& p, double quad_tol)
    : lambda_(p.nu.is_zero() ? 0.0 : lambda_of_t(t, p, quad_tol)) {
  require_time(t);
  if (!p.nu.is_zero()) rho_.emplace(t, p);
}

double ZSampler::draw(Rng& rng) {
  if (!rho_) return 0.0;
  const std::uint64_t n = poisson(rng, lambda_);
  double sum = 0.0;
  for (std::uint64_t k = 0; k < n; ++k) sum += rho_->draw(rng);
  return sum;
}

double z_sample(double t, const JcirParams& p, Rng& rng, double quad_tol) {
  if (p.nu.is_zero()) {
    require_time(t);
    return 0.0;
  }
  ZSampler sampler(t, p, quad_tol);
  return sampler.draw(rng);
}

}  // namespace jcir
