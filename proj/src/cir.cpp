#include "jcir/cir.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "jcir/quadrature.hpp"
#include "jcir/rng.hpp"

namespace jcir {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("horizon t must be positive and finite");
  }
}

// Power series sum_k (r/2)^{2k+q} / (k! Gamma(k+q+1)), accumulated relative
// to the first term; the running sum is renormalized into the exponent
// whenever it grows large, so arbitrarily big results stay representable.
ScaledBessel bessel_series(double q, double r) {
  const double log_t0 = q * std::log(r / 2.0) - std::lgamma(q + 1.0);
  const double quarter_r2 = 0.25 * r * r;
  double term = 1.0;
  double sum = 1.0;
  double shift = 0.0;
  for (int k = 0; k < 200000; ++k) {
    term *= quarter_r2 / ((k + 1.0) * (k + 1.0 + q));
    sum += term;
    if (term < sum * 1e-17) {
      return {sum, log_t0 + shift};
    }
    if (sum > 1e250) {
      const double s = sum;
      term /= s;
      sum = 1.0;
      shift += std::log(s);
    }
  }
  throw NumericError("bessel_iq: series did not converge");
}

// Large-argument expansion I_q(r) ~ e^r / sqrt(2 pi r) * sum of a_m(q)/r^m
// with alternating signs; truncated at the smallest term.
ScaledBessel bessel_asymptotic(double q, double r) {
  const double four_q2 = 4.0 * q * q;
  double term = 1.0;
  double sum = 1.0;
  double prev_abs = 1.0;
  for (int m = 1; m <= 40; ++m) {
    const double twom1 = 2.0 * m - 1.0;
    term *= -(four_q2 - twom1 * twom1) / (8.0 * m * r);
    if (std::abs(term) >= prev_abs) {
      break;  // divergent tail reached; stop at the smallest term
    }
    sum += term;
    prev_abs = std::abs(term);
    if (std::abs(term) < 1e-17 * std::abs(sum)) {
      break;
    }
  }
  return {sum / std::sqrt(2.0 * std::numbers::pi * r), r};
}

}  // namespace

CirGridConstants grid_constants(double t, const JcirParams& p) {
  require_time(t);
  const double decay = std::exp(-p.a * t);
  const double kappa = 2.0 * p.a / (p.sigma2() * (1.0 - decay));
  const double q = 2.0 * p.a * p.theta / p.sigma2() - 1.0;
  return {kappa, q, decay};
}

ScaledBessel bessel_iq(double q, double r, double r_switch) {
  if (!(q > -1.0)) {
    throw std::invalid_argument("bessel_iq: order must exceed -1");
  }
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument("bessel_iq: argument must be finite and >= 0");
  }
  if (r == 0.0) {
    if (q > 0.0) return {0.0, 0.0};
    if (q == 0.0) return {1.0, 0.0};
    return {kInf, 0.0};
  }
  // The expansion loses accuracy once the order is comparable to sqrt(r);
  // the series has no such restriction.
  if (r <= r_switch || q > 0.6 * std::sqrt(r)) {
    return bessel_series(q, r);
  }
  return bessel_asymptotic(q, r);
}

double cir_density(double t, double x, double y, const JcirParams& p) {
  require_time(t);
  if (!(x >= 0.0) || !(y >= 0.0)) {
    throw std::invalid_argument("cir_density: state values must be >= 0");
  }
  if (p.theta == 0.0) {
    throw std::invalid_argument(
        "cir_density: theta = 0 puts an atom at zero; no density exists");
  }
  const CirGridConstants g = grid_constants(t, p);
  const double q = g.q;
  const double v = g.v(y);

  if (x == 0.0) {
    if (y == 0.0) {
      if (q > 0.0) return 0.0;
      if (q == 0.0) return g.kappa;
      return kInf;
    }
    const double log_f =
        std::log(g.kappa) + q * std::log(v) - v - std::lgamma(q + 1.0);
    return std::exp(log_f);
  }

  const double u = g.u(x);
  if (y == 0.0) {
    // Leading series term of the Bessel factor: f -> kappa e^{-u} v^q / q!.
    if (q > 0.0) return 0.0;
    if (q == 0.0) return g.kappa * std::exp(-u);
    return kInf;
  }

  const ScaledBessel iq = bessel_iq(q, 2.0 * std::sqrt(u * v));
  const double log_f = std::log(g.kappa) - u - v +
                       0.5 * q * (std::log(v) - std::log(u)) +
                       std::log(iq.value) + iq.exponent;
  return std::exp(log_f);
}

double cir_sample(double t, double x, const JcirParams& p, Rng& rng) {
  require_time(t);
  if (!(x >= 0.0)) {
    throw std::invalid_argument("cir_sample: start value must be >= 0");
  }
  const CirGridConstants g = grid_constants(t, p);
  // Poisson-mixed gamma form of the noncentral chi-square transition:
  //   N ~ Poisson(kappa x e^{-at}),  X ~ Gamma(2 a theta / sigma^2 + N, 1/kappa).
  const double mix_mean = g.u(x);
  const std::uint64_t n = poisson(rng, mix_mean);
  const double shape = 2.0 * p.a * p.theta / p.sigma2() + static_cast<double>(n);
  return gamma_draw(rng, shape, 1.0 / g.kappa);
}

double cir_mean(double t, double x, const JcirParams& p) {
  require_time(t);
  const double decay = std::exp(-p.a * t);
  return p.theta * (1.0 - decay) + x * decay;
}

double cir_variance(double t, double x, const JcirParams& p) {
  require_time(t);
  const double decay = std::exp(-p.a * t);
  const double s2_over_a = p.sigma2() / p.a;
  return x * s2_over_a * (decay - decay * decay) +
         p.theta * 0.5 * s2_over_a * (1.0 - decay) * (1.0 - decay);
}

}  // namespace jcir
