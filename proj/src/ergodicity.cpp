#include "jcir/ergodicity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "jcir/cir.hpp"
#include "jcir/jumppart.hpp"
#include "jcir/quadrature.hpp"
#include "jcir/rng.hpp"
#include "jcir/simulate.hpp"
#include "jcir/threading.hpp"

namespace jcir {

double lyapunov_m(const JcirParams& p, double quad_tol) {
  const ExtendedReal m1 = first_moment(p.nu, quad_tol);
  if (!m1.finite) {
    throw NumericError("lyapunov_m: the measure's first moment is infinite");
  }
  return p.theta + m1.value / p.a;
}

LyapunovCheck lyapunov_check(double x, double t, const JcirParams& p, int n_mc,
                             Rng& rng) {
  if (!(x >= 0.0)) {
    throw std::invalid_argument("lyapunov_check: x must be >= 0");
  }
  if (n_mc < 2) {
    throw std::invalid_argument("lyapunov_check: need at least 2 draws");
  }
  const double decay = std::exp(-p.a * t);
  const double analytic = cir_mean(t, x, p) + z_mean(t, p);
  const double bound = decay * x + lyapunov_m(p);

  ExactSampler sampler(t, p);
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n_mc; ++i) {
    const double v = sampler.draw(x, rng);
    sum += v;
    sum2 += v * v;
  }
  const double n = static_cast<double>(n_mc);
  const double mc_mean = sum / n;
  const double var = std::max(0.0, (sum2 - n * mc_mean * mc_mean) / (n - 1.0));
  const double mc_se = std::sqrt(var / n);
  const bool ok = analytic <= bound + 1e-12 * (1.0 + std::abs(bound)) &&
                  std::abs(mc_mean - analytic) <= 4.0 * mc_se;
  return {analytic, mc_mean, mc_se, bound, ok};
}

namespace {

struct SharedBins {
  double lo;
  double width;
  int count;
};

SharedBins shared_binning(const std::vector<double>& a,
                          const std::vector<double>& b, int n_bins) {
  std::vector<double> pooled;
  pooled.reserve(a.size() + b.size());
  pooled.insert(pooled.end(), a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::sort(pooled.begin(), pooled.end());
  const double lo = pooled.front();
  const double hi = pooled.back();
  if (!(hi > lo)) return {lo, 1.0, 1};
  int count = n_bins;
  if (count <= 0) {
    const std::size_t n = pooled.size();
    const double q1 = pooled[n / 4];
    const double q3 = pooled[(3 * n) / 4];
    const double fd_width = 2.0 * (q3 - q1) / std::cbrt(static_cast<double>(n));
    count = fd_width > 0.0
                ? static_cast<int>(std::ceil((hi - lo) / fd_width))
                : 50;
    count = std::clamp(count, 10, 2000);
  }
  return {lo, (hi - lo) / count, count};
}

std::vector<std::int64_t> bin_counts(const std::vector<double>& sample,
                                     const SharedBins& bins) {
  std::vector<std::int64_t> counts(bins.count, 0);
  for (double v : sample) {
    int idx = static_cast<int>((v - bins.lo) / bins.width);
    idx = std::clamp(idx, 0, bins.count - 1);
    ++counts[idx];
  }
  return counts;
}

double tv_from_counts(const std::vector<std::int64_t>& ca,
                      const std::vector<std::int64_t>& cb, double na,
                      double nb) {
  double tv = 0.0;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    tv += std::abs(ca[i] / na - cb[i] / nb);
  }
  return 0.5 * tv;
}

// One multinomial resample of a histogram, by categorical draws against the
// cumulative original counts.
std::vector<std::int64_t> resample_counts(const std::vector<std::int64_t>& c,
                                          std::int64_t n, Rng& rng) {
  std::vector<double> cum(c.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    acc += static_cast<double>(c[i]);
    cum[i] = acc;
  }
  std::vector<std::int64_t> out(c.size(), 0);
  for (std::int64_t k = 0; k < n; ++k) {
    const double target = uniform01(rng) * acc;
    const auto it = std::lower_bound(cum.begin(), cum.end(), target);
    ++out[static_cast<std::size_t>(it - cum.begin())];
  }
  return out;
}

}  // namespace

TvEstimate tv_distance(const std::vector<double>& sample_a,
                       const std::vector<double>& sample_b, Rng& rng,
                       int n_boot, int n_bins) {
  if (sample_a.empty() || sample_b.empty()) {
    throw std::invalid_argument("tv_distance: empty sample");
  }
  const SharedBins bins = shared_binning(sample_a, sample_b, n_bins);
  const auto ca = bin_counts(sample_a, bins);
  const auto cb = bin_counts(sample_b, bins);
  const double na = static_cast<double>(sample_a.size());
  const double nb = static_cast<double>(sample_b.size());
  const double tv = tv_from_counts(ca, cb, na, nb);
  if (n_boot < 2) return {tv, 0.0};

  std::vector<std::uint64_t> keys(n_boot);
  for (int r = 0; r < n_boot; ++r) keys[r] = rng();
  std::vector<double> tvs(n_boot);
  parallel_chunks(n_boot, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t r = lo; r < hi; ++r) {
      Rng boot_rng(keys[r]);
      const auto ra = resample_counts(ca, sample_a.size(), boot_rng);
      const auto rb = resample_counts(cb, sample_b.size(), boot_rng);
      tvs[r] = tv_from_counts(ra, rb, na, nb);
    }
  });
  double sum = 0.0, sum2 = 0.0;
  for (double v : tvs) {
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / n_boot;
  const double var = std::max(0.0, (sum2 - n_boot * mean * mean) / (n_boot - 1.0));
  return {tv, std::sqrt(var)};
}

namespace {

struct LineFit {
  double slope;
  double intercept;
  double slope_se;
  double r2;
};

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  const int m = static_cast<int>(xs.size());
  double sx = 0.0, sy = 0.0;
  for (int i = 0; i < m; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / m;
  const double my = sy / m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int i = 0; i < m; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss_res = 0.0;
  for (int i = 0; i < m; ++i) {
    const double r = ys[i] - (intercept + slope * xs[i]);
    ss_res += r * r;
  }
  const double r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  const double slope_se =
      m > 2 ? std::sqrt(std::max(0.0, ss_res / (m - 2)) / sxx) : 0.0;
  return {slope, intercept, slope_se, r2};
}

}  // namespace

ErgodicityReport ergodic_rate_fit(const std::vector<double>& x_list,
                                  double delta, int n_max,
                                  const JcirParams& p, int n_mc,
                                  std::uint64_t seed) {
  if (x_list.empty()) {
    throw std::invalid_argument("ergodic_rate_fit: empty start list");
  }
  if (!(delta > 0.0) || n_max < 3 || n_mc < 100) {
    throw std::invalid_argument(
        "ergodic_rate_fit: need delta > 0, n_max >= 3, n_mc >= 100");
  }
  const double t_ref = 4.0 * n_max * delta;
  const std::vector<double> reference = invariant_sample(p, t_ref, n_mc, seed);

  // Bias floor of the binned TV estimator: the two halves of the reference
  // draw from the same law, so their measured distance is estimator noise
  // alone.  Halving the sample sizes inflates that floor by sqrt(2).  The
  // bootstrap se cannot see this bias, so points are trimmed against the
  // floor as well.
  const int ref_bin_count = shared_binning(reference, reference, 0).count;
  const std::size_t half = reference.size() / 2;
  const std::vector<double> ref_a(reference.begin(),
                                  reference.begin() + half);
  const std::vector<double> ref_b(reference.begin() + half, reference.end());
  Rng floor_rng = Rng::stream(seed, StreamTag::Bootstrap, ~0ull);
  const double tv_floor =
      tv_distance(ref_a, ref_b, floor_rng, 0, ref_bin_count).value /
      std::sqrt(2.0);

  ErgodicityReport report;
  report.delta = delta;
  report.m_hat = lyapunov_m(p);

  for (std::size_t s_idx = 0; s_idx < x_list.size(); ++s_idx) {
    const double x0 = x_list[s_idx];
    std::vector<std::vector<double>> marginals(
        n_max, std::vector<double>(n_mc, 0.0));
    parallel_chunks(n_mc, [&](std::int64_t lo, std::int64_t hi) {
      ExactSampler sampler(delta, p);
      for (std::int64_t i = lo; i < hi; ++i) {
        Rng rng = Rng::stream(seed, StreamTag::Ergodicity,
                              s_idx * static_cast<std::uint64_t>(n_mc) + i);
        double state = x0;
        for (int n = 0; n < n_max; ++n) {
          state = sampler.draw(state, rng);
          marginals[n][i] = state;
        }
      }
    });

    ErgodicStartFit fit;
    fit.x0 = x0;
    for (int n = 1; n <= n_max; ++n) {
      Rng boot_rng = Rng::stream(seed, StreamTag::Bootstrap,
                                 s_idx * 100000ull + static_cast<std::uint64_t>(n));
      const TvEstimate tv = tv_distance(marginals[n - 1], reference, boot_rng);
      fit.series.push_back({n, n * delta, tv.value, tv.se});
    }

    std::vector<double> xs, ys;
    for (const TvPoint& pt : fit.series) {
      if (!(pt.tv > 0.0) || pt.tv < 3.0 * pt.se || pt.tv < 2.0 * tv_floor) {
        break;
      }
      xs.push_back(static_cast<double>(pt.n));
      ys.push_back(std::log(pt.tv));
    }
    fit.n_used = static_cast<int>(xs.size());
    if (fit.n_used < 3) {
      throw NumericError(
          "ergodic_rate_fit: TV noise floor reached before 3 usable points; "
          "increase n_mc or reduce delta");
    }
    const LineFit line = fit_line(xs, ys);
    fit.beta_hat = std::exp(line.slope);
    fit.intercept = line.intercept;
    fit.slope_se = line.slope_se;
    fit.r2 = line.r2;
    report.starts.push_back(std::move(fit));
  }

  double beta_sum = 0.0;
  double worst_r2 = 1.0;
  for (const auto& s : report.starts) {
    beta_sum += s.beta_hat;
    worst_r2 = std::min(worst_r2, s.r2);
  }
  report.beta_hat = beta_sum / static_cast<double>(report.starts.size());
  report.fit_r2 = worst_r2;

  // Drift verdict: the analytic inequality on an (x, t) sweep plus one
  // Monte Carlo check at the first start.
  bool ok = true;
  const double x_top = std::max(
      10.0, *std::max_element(x_list.begin(), x_list.end()));
  const double m = report.m_hat;
  for (int i = 0; i <= 10 && ok; ++i) {
    for (int j = 1; j <= 10 && ok; ++j) {
      const double x = x_top * i / 10.0;
      const double t = delta * j;
      const double analytic = cir_mean(t, x, p) + z_mean(t, p);
      ok = analytic <= std::exp(-p.a * t) * x + m + 1e-9 * (1.0 + m);
    }
  }
  if (ok) {
    Rng rng = Rng::stream(seed, StreamTag::Lyapunov, 0);
    const LyapunovCheck check =
        lyapunov_check(x_list.front(), delta, p, std::min(n_mc, 20000), rng);
    ok = check.ok;
  }
  report.lyapunov_ok = ok;
  return report;
}

std::vector<double> invariant_sample(const JcirParams& p, double t_ref,
                                     int n_mc, std::uint64_t seed) {
  if (!(t_ref > 0.0) || n_mc < 1) {
    throw std::invalid_argument(
        "invariant_sample: need t_ref > 0 and n_mc >= 1");
  }
  std::vector<double> out(n_mc);
  parallel_chunks(n_mc, [&](std::int64_t lo, std::int64_t hi) {
    ExactSampler sampler(t_ref, p);
    for (std::int64_t i = lo; i < hi; ++i) {
      Rng rng = Rng::stream(seed, StreamTag::InvariantSample,
                            static_cast<std::uint64_t>(i));
      out[i] = sampler.draw(0.0, rng);
    }
  });
  return out;
}

}  // namespace jcir
