#include "jcir/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace jcir {

double normal(Rng& rng) {
  // Box-Muller; uniform01 is strictly inside (0,1) so the log is finite.
  const double u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

double exponential(Rng& rng, double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be positive");
  return -std::log(uniform01(rng)) / rate;
}

namespace {

// Sequential inversion; intended for small means.
std::uint64_t poisson_inversion(Rng& rng, double mean) {
  const double u = uniform01(rng);
  double p = std::exp(-mean);
  double cdf = p;
  std::uint64_t k = 0;
  // Cap far beyond any realistic quantile for mean <= 32.
  while (u > cdf && k < 400) {
    ++k;
    p *= mean / static_cast<double>(k);
    cdf += p;
  }
  return k;
}

}  // namespace

std::uint64_t poisson(Rng& rng, double mean) {
  if (!(mean >= 0.0)) throw std::invalid_argument("poisson: mean must be nonnegative");
  if (mean == 0.0) return 0;
  if (mean <= 32.0) return poisson_inversion(rng, mean);
  // Exact for large means: a Poisson sum splits into independent Poisson
  // chunks with small means, each drawn by inversion.
  const auto chunks = static_cast<std::uint64_t>(std::ceil(mean / 25.0));
  const double m = mean / static_cast<double>(chunks);
  std::uint64_t total = 0;
  for (std::uint64_t i = 0; i < chunks; ++i) total += poisson_inversion(rng, m);
  return total;
}

double gamma_draw(Rng& rng, double shape, double scale) {
  if (!(shape >= 0.0) || !(scale > 0.0))
    throw std::invalid_argument("gamma_draw: shape must be >= 0 and scale > 0");
  if (shape == 0.0) return 0.0;
  if (shape < 1.0) {
    // Boost the shape, then apply the power correction (Marsaglia & Tsang).
    const double g = gamma_draw(rng, shape + 1.0, 1.0);
    return scale * g * std::pow(uniform01(rng), 1.0 / shape);
  }
  // Marsaglia & Tsang (2000) squeeze method for shape >= 1.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform01(rng);
    if (u < 1.0 - 0.0331 * x * x * x * x) return scale * d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return scale * d * v;
  }
}

}  // namespace jcir
