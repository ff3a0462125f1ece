#include "jcir/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "jcir/cir.hpp"
#include "jcir/jumppart.hpp"
#include "jcir/threading.hpp"

namespace jcir {

namespace {

struct Moments {
  double mean;
  double var;
};

// First two transition moments: diffusion part in closed form plus the jump
// part's cumulants from the measure's first two moments.
Moments transition_moments(double t, double x, const JcirParams& p,
                           double quad_tol) {
  const ExtendedReal m1 = first_moment(p.nu, quad_tol);
  const ExtendedReal m2 = second_moment(p.nu, quad_tol);
  if (!m1.finite || !m2.finite) {
    throw NumericError(
        "inversion: the measure's first two moments must be finite to size "
        "the interval");
  }
  const double decay = std::exp(-p.a * t);
  const double one_me = 1.0 - decay;
  const double one_me2 = 1.0 - decay * decay;
  const double z_mean_v = one_me / p.a * m1.value;
  const double z_var = p.sigma2() / p.a * m1.value *
                           (one_me / p.a - one_me2 / (2.0 * p.a)) +
                       m2.value * one_me2 / (2.0 * p.a);
  return {cir_mean(t, x, p) + z_mean_v, cir_variance(t, x, p) + z_var};
}

// Cosine-series evaluation at one point, with the k = 0 term halved.  The
// rotation e^{i k step} is refreshed from cos/sin every block so the
// round-off drift of repeated unit-modulus multiplication stays negligible.
double cos_series_at(const std::vector<double>& coeff, double step) {
  constexpr int kBlock = 1024;
  const int n = static_cast<int>(coeff.size());
  double sum = 0.5 * coeff[0];
  for (int k0 = 1; k0 < n; k0 += kBlock) {
    const int k1 = std::min(n, k0 + kBlock);
    const Complex rot{std::cos(step), std::sin(step)};
    Complex e{std::cos(k0 * step), std::sin(k0 * step)};
    for (int k = k0; k < k1; ++k) {
      sum += coeff[k] * e.real();
      e *= rot;
    }
  }
  return sum;
}

double tail_estimate(const std::vector<double>& magnitude, double span) {
  const int n = static_cast<int>(magnitude.size());
  if (n < 32) return std::numeric_limits<double>::infinity();
  auto window_max = [&](int hi) {
    double m = 0.0;
    for (int k = hi - 8; k < hi; ++k) m = std::max(m, magnitude[k]);
    return m;
  };
  const double c_end = window_max(n);
  const double c_mid = window_max(n / 2);
  if (c_end <= 0.0) return 0.0;
  const double p_hat = std::log(std::max(c_mid / c_end, 1.0)) / std::numbers::ln2;
  // Envelope integral of c_end (k/n)^{-p} beyond n; ignores the oscillation
  // cancellation actually present, so this is conservative.
  const double factor =
      p_hat > 1.05 ? static_cast<double>(n) / (p_hat - 1.0)
                   : static_cast<double>(n);
  return 2.0 / span * c_end * factor;
}

}  // namespace

double cos_span(double t, double x, const JcirParams& p, double span_l,
                double quad_tol) {
  if (!(span_l > 0.0)) {
    throw std::invalid_argument("cos_span: span_l must be positive");
  }
  const Moments m = transition_moments(t, x, p, quad_tol);
  const double b = m.mean + span_l * std::sqrt(std::max(m.var, 0.0));
  if (!(b > 0.0)) {
    throw NumericError("cos_span: degenerate transition, empty interval");
  }
  return b;
}

std::vector<double> default_y_grid(double t, double x, const JcirParams& p,
                                   int n_points, double span_l) {
  if (n_points < 2) {
    throw std::invalid_argument("default_y_grid: need at least 2 points");
  }
  const double b = cos_span(t, x, p, span_l);
  std::vector<double> grid(n_points);
  for (int j = 0; j < n_points; ++j) {
    grid[j] = b * j / (n_points - 1.0);
  }
  return grid;
}

std::vector<double> lower_bound_y_grid(double t, double x,
                                       const JcirParams& p, int n_points,
                                       double span_l) {
  if (n_points < 8) {
    throw std::invalid_argument("lower_bound_y_grid: need at least 8 points");
  }
  const double b = cos_span(t, x, p, span_l);
  const int n_log = n_points / 4;
  const int n_lin = n_points - n_log;
  std::vector<double> grid;
  grid.reserve(n_points);
  // y = 0 is excluded: with 2 a theta < sigma^2 both densities blow up there
  // and the pointwise comparison is ill-posed.
  const double y_min = 1e-4 * b;
  const double y_knee = 0.1 * b;
  for (int j = 0; j < n_log; ++j) {
    grid.push_back(y_min * std::pow(y_knee / y_min, j / (n_log - 1.0)));
  }
  for (int j = 1; j <= n_lin; ++j) {
    grid.push_back(y_knee + (0.9 * b - y_knee) * j / static_cast<double>(n_lin));
  }
  return grid;
}

DensityGrid density_from_cf(double t, double x,
                            const std::vector<double>& y_grid,
                            const JcirParams& p, const InversionConfig& cfg) {
  if (y_grid.empty()) {
    throw std::invalid_argument("density_from_cf: empty y_grid");
  }
  for (std::size_t j = 0; j < y_grid.size(); ++j) {
    if (!(y_grid[j] >= 0.0) || (j > 0 && !(y_grid[j] > y_grid[j - 1]))) {
      throw std::invalid_argument(
          "density_from_cf: y_grid must be increasing and non-negative");
    }
  }
  if (cfg.n_terms < 16 || cfg.n_terms > (1 << 22)) {
    throw std::invalid_argument("density_from_cf: n_terms out of range");
  }
  const double b = cos_span(t, x, p, cfg.span_l, cfg.quad_tol);
  if (y_grid.back() > b * (1.0 + 1e-12)) {
    throw std::invalid_argument(
        "density_from_cf: y_grid exceeds the inversion interval; lower the "
        "grid or raise span_l");
  }

  const int n = cfg.n_terms;
  std::vector<double> coeff(n);
  std::vector<double> magnitude(n);
  parallel_chunks(n, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t k = lo; k < hi; ++k) {
      const Complex u{0.0, k * std::numbers::pi / b};
      const Complex cf = jcir_cf(t, x, FrequencyPoint(u), p, cfg.quad_tol).value;
      coeff[k] = cf.real();
      magnitude[k] = std::abs(cf);
    }
  });

  DensityGrid out;
  out.t = t;
  out.x = x;
  out.y_grid = y_grid;
  out.p_values.resize(y_grid.size());
  parallel_chunks(static_cast<std::int64_t>(y_grid.size()),
                  [&](std::int64_t lo, std::int64_t hi) {
                    for (std::int64_t j = lo; j < hi; ++j) {
                      out.p_values[j] =
                          2.0 / b *
                          cos_series_at(coeff, std::numbers::pi * y_grid[j] / b);
                    }
                  });
  out.inv_error_bound = tail_estimate(magnitude, b);

  // Mass check on an internal uniform grid, independent of the caller grid.
  const int m_pts = 4096;
  std::vector<double> mass_vals(m_pts + 1);
  parallel_chunks(m_pts + 1, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) {
      mass_vals[i] = cos_series_at(coeff, std::numbers::pi * i / m_pts);
    }
  });
  double mass = 0.0;
  for (int i = 0; i < m_pts; ++i) mass += mass_vals[i] + mass_vals[i + 1];
  mass *= 0.5 * (b / m_pts) * (2.0 / b);
  if (std::abs(mass - 1.0) > cfg.tol_mass) {
    throw NumericError(
        "density_from_cf: recovered mass deviates from 1; increase span_l or "
        "n_terms");
  }
  return out;
}

LowerBoundReport lower_bound_check(double t, double x,
                                   const std::vector<double>& y_grid,
                                   const JcirParams& p, double tol,
                                   const InversionConfig& cfg) {
  LowerBoundReport report;
  report.t = t;
  report.x = x;
  report.y_grid = y_grid;
  const std::size_t n = y_grid.size();
  report.f_values.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    report.f_values[j] = cir_density(t, x, y_grid[j], p);
  }
  if (p.nu.is_zero()) {
    // No jumps: the transition density is the diffusion density and the
    // zero-jump probability is 1, so the bound holds with equality.
    report.lambda_t = 0.0;
    report.c_t = 1.0;
    report.p_values = report.f_values;
    report.margin.assign(n, 0.0);
    report.min_margin = 0.0;
    report.violations = 0;
    return report;
  }
  report.lambda_t = lambda_of_t(t, p, cfg.quad_tol);
  report.c_t = std::exp(-report.lambda_t);
  report.p_values = density_from_cf(t, x, y_grid, p, cfg).p_values;
  report.margin.resize(n);
  report.min_margin = std::numeric_limits<double>::infinity();
  report.violations = 0;
  for (std::size_t j = 0; j < n; ++j) {
    report.margin[j] = report.p_values[j] - report.c_t * report.f_values[j];
    report.min_margin = std::min(report.min_margin, report.margin[j]);
    if (report.margin[j] < -tol) ++report.violations;
  }
  return report;
}

}  // namespace jcir
