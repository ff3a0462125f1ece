#include "jcir/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>

#include "jcir/rng.hpp"

namespace jcir {

JumpDensity exponential_jumps(double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("exponential_jumps: rate must be positive");
  JumpDensity d;
  d.name = "exponential(rate=" + std::to_string(rate) + ")";
  d.pdf = [rate](double xi) { return xi > 0.0 ? rate * std::exp(-rate * xi) : 0.0; };
  d.sample = [rate](Rng& rng) { return exponential(rng, rate); };
  d.mgf = [rate](Complex w) { return rate / (rate - w); };
  d.exponential_rate = rate;
  return d;
}

JumpDensity gamma_jumps(double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0))
    throw std::invalid_argument("gamma_jumps: shape and rate must be positive");
  JumpDensity d;
  d.name = "gamma(shape=" + std::to_string(shape) + ",rate=" + std::to_string(rate) + ")";
  const double log_norm = shape * std::log(rate) - std::lgamma(shape);
  d.pdf = [=](double xi) {
    if (!(xi > 0.0)) return 0.0;
    return std::exp(log_norm + (shape - 1.0) * std::log(xi) - rate * xi);
  };
  d.sample = [shape, rate](Rng& rng) { return gamma_draw(rng, shape, 1.0 / rate); };
  d.mgf = [shape, rate](Complex w) { return std::pow(rate / (rate - w), shape); };
  return d;
}

struct LevyMeasure::SamplerCache {
  std::once_flag once;
  std::shared_ptr<const JumpSampler> view;
  // Tabulated inverse-CDF data for infinite-activity truncations; kept so the
  // truncated() density can reuse the grid bounds.
  std::shared_ptr<const std::vector<double>> grid, cum;
};

LevyMeasure::LevyMeasure(Kind k) : kind_(k), cache_(std::make_shared<SamplerCache>()) {}

LevyMeasure LevyMeasure::zero() { return LevyMeasure(Kind::Zero); }

LevyMeasure LevyMeasure::point_masses(std::vector<PointMass> points) {
  LevyMeasure m(Kind::PointMasses);
  if (points.empty()) throw std::invalid_argument("point_masses: need at least one atom");
  for (const auto& p : points) {
    if (!(p.xi > 0.0) || !std::isfinite(p.xi))
      throw std::invalid_argument("point_masses: jump sizes must be positive and finite");
    if (!(p.weight > 0.0) || !std::isfinite(p.weight))
      throw std::invalid_argument("point_masses: weights must be positive and finite");
  }
  m.points_ = std::move(points);
  m.label_ = "point_masses";
  return m;
}

LevyMeasure LevyMeasure::finite_activity(double rate, JumpDensity density) {
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw std::invalid_argument("finite_activity: rate must be positive and finite");
  if (!density.pdf || !density.sample)
    throw std::invalid_argument("finite_activity: density needs pdf and sampler");
  LevyMeasure m(Kind::FiniteActivity);
  m.rate_ = rate;
  m.density_ = std::move(density);
  m.label_ = "finite_activity[" + m.density_.name + "]";
  return m;
}

LevyMeasure LevyMeasure::infinite_activity(std::function<double(double)> density,
                                           double eps_trunc, std::string label) {
  if (!density) throw std::invalid_argument("infinite_activity: density required");
  if (!(eps_trunc > 0.0) || !(eps_trunc < 1.0))
    throw std::invalid_argument("infinite_activity: eps_trunc must lie in (0,1)");
  LevyMeasure m(Kind::InfiniteActivity);
  m.n_ = std::move(density);
  m.eps_ = eps_trunc;
  m.label_ = "infinite_activity[" + label + "]";
  return m;
}

LevyMeasure LevyMeasure::tempered_stable(double scale, double alpha, double decay,
                                         double eps_trunc) {
  if (!(scale > 0.0)) throw std::invalid_argument("tempered_stable: scale must be positive");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("tempered_stable: alpha must lie in (0,1)");
  if (!(decay >= 0.0)) throw std::invalid_argument("tempered_stable: decay must be >= 0");
  auto n = [scale, alpha, decay](double xi) {
    if (!(xi > 0.0)) return 0.0;
    return scale * std::pow(xi, -1.0 - alpha) * std::exp(-decay * xi);
  };
  return infinite_activity(n, eps_trunc,
                           "tempered_stable(scale=" + std::to_string(scale) +
                               ",alpha=" + std::to_string(alpha) +
                               ",decay=" + std::to_string(decay) + ")");
}

const std::vector<PointMass>& LevyMeasure::points() const {
  if (kind_ != Kind::PointMasses) throw std::logic_error("LevyMeasure: not point masses");
  return points_;
}

double LevyMeasure::rate() const {
  if (kind_ != Kind::FiniteActivity) throw std::logic_error("LevyMeasure: not finite activity");
  return rate_;
}

const JumpDensity& LevyMeasure::jump_density() const {
  if (kind_ != Kind::FiniteActivity) throw std::logic_error("LevyMeasure: not finite activity");
  return density_;
}

double LevyMeasure::eps_trunc() const {
  if (kind_ != Kind::InfiniteActivity) throw std::logic_error("LevyMeasure: not infinite activity");
  return eps_;
}

double LevyMeasure::density_value(double xi) const {
  if (kind_ != Kind::InfiniteActivity) throw std::logic_error("LevyMeasure: not infinite activity");
  return n_(xi);
}

namespace {

ExtendedReal from_tail(const quad::TailResult<double>& r, const char* what) {
  if (r.diverged) return {std::numeric_limits<double>::infinity(), false};
  if (!r.converged) throw NumericError(std::string(what) + ": quadrature did not converge");
  return {r.value, true};
}

}  // namespace

ExtendedReal LevyMeasure::integral_small(const std::function<double(double)>& f,
                                         double tol) const {
  switch (kind_) {
    case Kind::Zero:
      return {0.0, true};
    case Kind::PointMasses: {
      double s = 0.0;
      for (const auto& p : points_)
        if (p.xi <= 1.0) s += p.weight * f(p.xi);
      return {s, true};
    }
    case Kind::FiniteActivity: {
      auto g = [&](double xi) { return f(xi) * density_.pdf(xi); };
      auto r = quad::integrate<double>(g, 0.0, 1.0, tol, tol);
      if (!r.converged) throw NumericError("levy integral on (0,1]: did not converge");
      return {rate_ * r.value, true};
    }
    case Kind::InfiniteActivity: {
      // Mirror xi = 1/u maps (0,1] to [1,inf) so the doubling scheme's
      // divergence detection also covers the small-jump end.
      auto g = [&](double u) {
        const double xi = 1.0 / u;
        return f(xi) * n_(xi) / (u * u);
      };
      return from_tail(quad::integrate_to_inf<double>(g, 1.0, tol, tol),
                       "levy integral on (0,1]");
    }
  }
  throw std::logic_error("unreachable");
}

ExtendedReal LevyMeasure::integral_tail(const std::function<double(double)>& f,
                                        double tol) const {
  switch (kind_) {
    case Kind::Zero:
      return {0.0, true};
    case Kind::PointMasses: {
      double s = 0.0;
      for (const auto& p : points_)
        if (p.xi > 1.0) s += p.weight * f(p.xi);
      return {s, true};
    }
    case Kind::FiniteActivity: {
      auto g = [&](double xi) { return f(xi) * density_.pdf(xi); };
      auto r = quad::integrate_to_inf<double>(g, 1.0, tol, tol);
      auto e = from_tail(r, "levy integral on (1,inf)");
      return {rate_ * e.value, e.finite};
    }
    case Kind::InfiniteActivity: {
      auto g = [&](double xi) { return f(xi) * n_(xi); };
      return from_tail(quad::integrate_to_inf<double>(g, 1.0, tol, tol),
                       "levy integral on (1,inf)");
    }
  }
  throw std::logic_error("unreachable");
}

Complex LevyMeasure::integral_complex(const std::function<Complex(double)>& h,
                                      double tol) const {
  switch (kind_) {
    case Kind::Zero:
      return {0.0, 0.0};
    case Kind::PointMasses: {
      Complex s{0.0, 0.0};
      for (const auto& p : points_) s += p.weight * h(p.xi);
      return s;
    }
    case Kind::FiniteActivity: {
      auto g = [&](double xi) { return h(xi) * density_.pdf(xi); };
      auto r = quad::integrate_to_inf<Complex>(g, 0.0, tol, tol);
      if (!r.converged)
        throw NumericError("levy cf integral: quadrature did not converge");
      return rate_ * r.value;
    }
    case Kind::InfiniteActivity: {
      // Split at 1: |h| ~ xi near 0 keeps the small side integrable.
      auto gs = [&](double u) {
        const double xi = 1.0 / u;
        return h(xi) * (n_(xi) / (u * u));
      };
      auto rs = quad::integrate_to_inf<Complex>(gs, 1.0, tol, tol);
      auto gt = [&](double xi) { return h(xi) * n_(xi); };
      auto rt = quad::integrate_to_inf<Complex>(gt, 1.0, tol, tol);
      if (!rs.converged || !rt.converged || rs.diverged || rt.diverged)
        throw NumericError("levy cf integral: quadrature did not converge");
      return rs.value + rt.value;
    }
  }
  throw std::logic_error("unreachable");
}

const JumpSampler& LevyMeasure::sampling_view() const {
  std::call_once(cache_->once, [this] {
    auto view = std::make_shared<JumpSampler>();
    switch (kind_) {
      case Kind::Zero:
        view->total_rate = 0.0;
        view->draw = [](Rng&) -> double {
          throw std::logic_error("zero measure has no jumps to draw");
        };
        break;
      case Kind::PointMasses: {
        double total = 0.0;
        for (const auto& p : points_) total += p.weight;
        std::vector<double> cum, xs;
        double acc = 0.0;
        for (const auto& p : points_) {
          acc += p.weight;
          cum.push_back(acc);
          xs.push_back(p.xi);
        }
        view->total_rate = total;
        view->draw = [cum, xs, total](Rng& rng) {
          const double u = uniform01(rng) * total;
          const auto it = std::lower_bound(cum.begin(), cum.end(), u);
          return xs[static_cast<size_t>(it - cum.begin())];
        };
        break;
      }
      case Kind::FiniteActivity:
        view->total_rate = rate_;
        view->draw = density_.sample;
        break;
      case Kind::InfiniteActivity: {
        // Inverse-CDF table on a geometric grid over [eps, hi]; hi is where
        // cell contributions fall below 1e-15 of the running mass.
        auto grid = std::make_shared<std::vector<double>>();
        auto cum = std::make_shared<std::vector<double>>();
        const double ratio = std::pow(2.0, 1.0 / 256.0);
        grid->push_back(eps_);
        cum->push_back(0.0);
        double x = eps_;
        for (int j = 0; j < 200000; ++j) {
          const double xn = x * ratio;
          const double cell = quad::gk15<double>(n_, x, xn).value;
          grid->push_back(xn);
          cum->push_back(cum->back() + cell);
          x = xn;
          if (x > 1.0 && cell < 1e-15 * cum->back()) break;
        }
        const double total = cum->back();
        if (!(total > 0.0) || !std::isfinite(total))
          throw NumericError("infinite-activity truncation has no finite mass");
        cache_->grid = grid;
        cache_->cum = cum;
        view->total_rate = total;
        view->draw = [grid, cum, total](Rng& rng) {
          const double u = uniform01(rng) * total;
          const auto it = std::upper_bound(cum->begin(), cum->end(), u);
          const auto j = static_cast<size_t>(
              std::min<std::ptrdiff_t>(it - cum->begin(), cum->size() - 1));
          const double c0 = (*cum)[j - 1], c1 = (*cum)[j];
          const double frac = c1 > c0 ? (u - c0) / (c1 - c0) : 0.5;
          return (*grid)[j - 1] + frac * ((*grid)[j] - (*grid)[j - 1]);
        };
        break;
      }
    }
    cache_->view = std::move(view);
  });
  return *cache_->view;
}

LevyMeasure LevyMeasure::truncated() const {
  if (kind_ != Kind::InfiniteActivity) return *this;
  const auto& view = sampling_view();
  const double total = view.total_rate;
  const double lo = eps_;
  const double hi = cache_->grid->back();
  auto n = n_;
  JumpDensity d;
  d.name = "truncated[" + label_ + "]";
  d.pdf = [n, total, lo, hi](double xi) {
    if (xi < lo || xi > hi) return 0.0;
    return n(xi) / total;
  };
  d.sample = view.draw;
  return finite_activity(total, std::move(d));
}

double LevyMeasure::small_jump_bias_rate() const {
  if (kind_ != Kind::InfiniteActivity) return 0.0;
  // integral of xi * n(xi) over (0, eps], written with xi = eps * e^{-s} so
  // a power-law blowup at 0 becomes exponential decay in s
  auto g = [&](double s) {
    const double xi = eps_ * std::exp(-s);
    return xi * xi * n_(xi);
  };
  auto r = quad::integrate_to_inf<double>(g, 0.0, 1e-14, 1e-10);
  if (r.diverged || !r.converged)
    throw NumericError("small-jump bias: measure is not admissible");
  return r.value;
}

JcirParams::JcirParams(double a_, double theta_, double sigma_, LevyMeasure nu_)
    : a(a_), theta(theta_), sigma(sigma_), nu(std::move(nu_)) {
  if (!(a > 0.0) || !std::isfinite(a))
    throw std::invalid_argument("JcirParams: a must be positive and finite");
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw std::invalid_argument("JcirParams: sigma must be positive and finite");
  if (!(theta >= 0.0) || !std::isfinite(theta))
    throw std::invalid_argument("JcirParams: theta must be nonnegative and finite");
}

namespace {

ExtendedReal sum_ext(const ExtendedReal& x, const ExtendedReal& y) {
  if (!x.finite || !y.finite) return {std::numeric_limits<double>::infinity(), false};
  return {x.value + y.value, true};
}

}  // namespace

AdmissibilityReport check_admissible(const LevyMeasure& nu, double quad_tol) {
  AdmissibilityReport rep;
  auto ident = [](double xi) { return xi; };
  auto one = [](double) { return 1.0; };
  auto xilog = [](double xi) { return xi * std::log(1.0 / xi); };

  const auto small_xi = nu.integral_small(ident, quad_tol);
  const auto tail_mass = nu.integral_tail(one, quad_tol);
  rep.int_xi_wedge_one = sum_ext(small_xi, tail_mass);
  rep.int_tail_xi = nu.integral_tail(ident, quad_tol);
  rep.int_xi_log_small = nu.integral_small(xilog, quad_tol);
  rep.first_moment = sum_ext(small_xi, rep.int_tail_xi);

  rep.admissible = rep.int_xi_wedge_one.finite;
  rep.lemma_log_ok = rep.admissible && rep.int_xi_log_small.finite;
  rep.lemma_tail_ok = rep.admissible && rep.int_tail_xi.finite;
  rep.theorem_ok = rep.lemma_log_ok && rep.lemma_tail_ok;
  return rep;
}

ExtendedReal first_moment(const LevyMeasure& nu, double quad_tol) {
  auto ident = [](double xi) { return xi; };
  return sum_ext(nu.integral_small(ident, quad_tol), nu.integral_tail(ident, quad_tol));
}

ExtendedReal second_moment(const LevyMeasure& nu, double quad_tol) {
  auto sq = [](double xi) { return xi * xi; };
  return sum_ext(nu.integral_small(sq, quad_tol), nu.integral_tail(sq, quad_tol));
}

}  // namespace jcir
