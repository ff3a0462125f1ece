#include "jcir/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include "jcir/cir.hpp"
#include "jcir/rng.hpp"

namespace jcir {

PathConfig::PathConfig(double x0_, double horizon_, double dt_,
                       std::uint64_t seed_)
    : x0(x0_), horizon(horizon_), dt(dt_), seed(seed_) {
  if (!(x0 >= 0.0) || !std::isfinite(x0)) {
    throw std::invalid_argument("PathConfig: x0 must be >= 0 and finite");
  }
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("PathConfig: horizon must be > 0 and finite");
  }
  if (!(dt > 0.0) || !(dt <= horizon)) {
    throw std::invalid_argument("PathConfig: need 0 < dt <= horizon");
  }
}

double exact_marginal_sample(double t, double x, const JcirParams& p,
                             Rng& rng) {
  return cir_sample(t, x, p, rng) + z_sample(t, p, rng);
}

ExactSampler::ExactSampler(double t, const JcirParams& p, double quad_tol)
    : t_(t), p_(p), z_(t, p, quad_tol) {}

double ExactSampler::draw(double x, Rng& rng) {
  return cir_sample(t_, x, p_, rng) + z_.draw(rng);
}

namespace {

template <class Record>
double euler_run(const PathConfig& cfg, const JcirParams& p,
                 std::uint64_t path_index, Record&& record) {
  Rng rng = Rng::stream(cfg.seed, StreamTag::EulerPath, path_index);
  const JumpSampler* jumps =
      p.nu.is_zero() ? nullptr : &p.nu.sampling_view();
  double x = cfg.x0;
  double t = 0.0;
  record(t, x);
  while (t < cfg.horizon - 1e-12 * cfg.horizon) {
    const double h = std::min(cfg.dt, cfg.horizon - t);
    const double xp = std::max(x, 0.0);
    double dj = 0.0;
    if (jumps) {
      const std::uint64_t n = poisson(rng, jumps->total_rate * h);
      for (std::uint64_t k = 0; k < n; ++k) dj += jumps->draw(rng);
    }
    x += p.a * (p.theta - xp) * h +
         p.sigma * std::sqrt(xp) * std::sqrt(h) * normal(rng) + dj;
    t += h;
    record(t, x);
  }
  return x;
}

}  // namespace

std::vector<PathPoint> euler_path(const PathConfig& cfg, const JcirParams& p,
                                  std::uint64_t path_index) {
  std::vector<PathPoint> path;
  path.reserve(static_cast<std::size_t>(cfg.horizon / cfg.dt) + 2);
  euler_run(cfg, p, path_index,
            [&](double t, double x) { path.push_back({t, x}); });
  return path;
}

double euler_terminal(const PathConfig& cfg, const JcirParams& p,
                      std::uint64_t path_index) {
  return euler_run(cfg, p, path_index, [](double, double) {});
}

SkeletonChain skeleton_chain(double x, double delta, int n_steps,
                             const JcirParams& p, Rng& rng) {
  if (!(x >= 0.0)) {
    throw std::invalid_argument("skeleton_chain: start must be >= 0");
  }
  if (n_steps < 0) {
    throw std::invalid_argument("skeleton_chain: n_steps must be >= 0");
  }
  ExactSampler sampler(delta, p);
  SkeletonChain chain{delta, {}};
  chain.states.reserve(static_cast<std::size_t>(n_steps) + 1);
  chain.states.push_back(x);
  double state = x;
  for (int n = 0; n < n_steps; ++n) {
    state = sampler.draw(state, rng);
    chain.states.push_back(state);
  }
  return chain;
}

McCf mc_cf(const std::vector<double>& samples, FrequencyPoint u) {
  if (samples.empty()) {
    throw std::invalid_argument("mc_cf: empty sample");
  }
  const Complex uv = u.value();
  const double n = static_cast<double>(samples.size());
  std::vector<Complex> values(samples.size());
  double sum_re = 0.0, sum_im = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    values[i] = std::exp(uv * samples[i]);
    sum_re += values[i].real();
    sum_im += values[i].imag();
  }
  const double mean_re = sum_re / n;
  const double mean_im = sum_im / n;
  // centered second pass, avoids cancellation when the spread is tiny
  double ss_re = 0.0, ss_im = 0.0;
  for (const Complex& e : values) {
    const double dre = e.real() - mean_re;
    const double dim = e.imag() - mean_im;
    ss_re += dre * dre;
    ss_im += dim * dim;
  }
  const double denom = std::max(1.0, n - 1.0);
  return {Complex{mean_re, mean_im}, std::sqrt(ss_re / denom / n),
          std::sqrt(ss_im / denom / n)};
}

}  // namespace jcir
