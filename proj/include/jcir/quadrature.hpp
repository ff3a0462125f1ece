#pragma once

#include <cmath>
#include <complex>
#include <queue>
#include <stdexcept>
#include <vector>

namespace jcir {

// Raised when a numerical routine cannot reach its requested accuracy or
// detects a divergent quantity where a finite one was required.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace quad {

// Gauss-Kronrod 7-15 pair (QUADPACK nodes/weights on [-1,1], symmetric half).
inline constexpr double kNodes[8] = {
    0.000000000000000, 0.207784955007898, 0.405845151377397, 0.586087235467691,
    0.741531185599394, 0.864864423359769, 0.949107912342759, 0.991455371120813,
};
inline constexpr double kWeightsK[8] = {
    0.209482141084728, 0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979, 0.022935322010529,
};
// Gauss-7 weights sit on the even-index nodes.
inline constexpr double kWeightsG[4] = {
    0.417959183673469, 0.381830050505119, 0.279705391489277, 0.129484966168870,
};

template <class T>
struct Panel {
  double a, b;
  T value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class T, class F>
Panel<T> gk15(F&& f, double a, double b) {
  const double h = 0.5 * (b - a);
  const double c = 0.5 * (a + b);
  T gauss = T{};
  T kron = T{};
  for (int i = 0; i < 8; ++i) {
    T fs;
    if (i == 0) {
      fs = f(c);
    } else {
      fs = f(c - h * kNodes[i]) + f(c + h * kNodes[i]);
    }
    kron += kWeightsK[i] * fs;
    if (i % 2 == 0) gauss += kWeightsG[i / 2] * fs;
  }
  kron *= h;
  gauss *= h;
  return Panel<T>{a, b, kron, std::abs(kron - gauss)};
}

template <class T>
struct Result {
  T value;
  double error;
  bool converged;
};

// Globally adaptive bisection driven by a max-error heap.
template <class T, class F>
Result<T> integrate(F&& f, double a, double b, double abs_tol, double rel_tol,
                    int max_panels = 4000) {
  if (!(b > a)) return {T{}, 0.0, true};
  std::priority_queue<Panel<T>> heap;
  auto first = gk15<T>(f, a, b);
  T total = first.value;
  double err = first.error;
  heap.push(first);
  int n = 1;
  while (n < max_panels) {
    const double tol = std::max(abs_tol, rel_tol * std::abs(total));
    if (err <= tol) break;
    Panel<T> worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Interval no longer splittable in double precision; accept it.
      err -= worst.error;
      continue;
    }
    auto left = gk15<T>(f, worst.a, mid);
    auto right = gk15<T>(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++n;
  }
  const double tol = std::max(abs_tol, rel_tol * std::abs(total));
  return {total, err, err <= tol};
}

template <class T, class F>
T integrate_or_throw(F&& f, double a, double b, double tol, const char* what,
                     int max_panels = 4000) {
  auto r = integrate<T>(f, a, b, tol, tol, max_panels);
  if (!r.converged) throw NumericError(std::string(what) + ": quadrature did not converge");
  return r.value;
}

template <class T>
struct TailResult {
  T value;
  double error;
  bool converged;
  bool diverged;  // partial integrals kept growing over consecutive doublings
};

// Integral over [a, +inf) by doubling segments.  Convergence: two consecutive
// segments add less than the tolerance.  Divergence: the partial integral
// keeps growing by more than rel_tol in relative terms while the per-segment
// additions stop shrinking, over 5 consecutive doublings (a power-law or
// flatter tail; a convergent tail has geometrically shrinking additions).
template <class T, class F>
TailResult<T> integrate_to_inf(F&& f, double a, double abs_tol, double rel_tol,
                               double first_width = 1.0) {
  T total{};
  double err = 0.0;
  double lo = a;
  double width = first_width;
  double prev_added = -1.0;
  int growing = 0;
  int negligible = 0;
  for (int k = 0; k < 80; ++k) {
    auto seg = integrate<T>(f, lo, lo + width, 0.25 * abs_tol, 0.25 * rel_tol);
    total += seg.value;
    err += seg.error;
    const double added = std::abs(seg.value);
    const double tol = std::max(abs_tol, rel_tol * std::abs(total));
    if (added <= tol) {
      growing = 0;
      if (++negligible >= 2) return {total, err, true, false};
    } else {
      negligible = 0;
      if (prev_added >= 0.0 && added > 0.9 * prev_added) {
        if (++growing >= 5) return {total, err, false, true};
      } else {
        growing = 0;
      }
    }
    prev_added = added;
    lo += width;
    width *= 2.0;
  }
  return {total, err, false, false};
}

// Integral over (0, b] with an integrable endpoint singularity of type
// y^q * smooth, q > -1: substitute y = w^{1/(q+1)} so the integrand becomes
// bounded near 0.
template <class T, class F>
Result<T> integrate_power_endpoint(F&& f, double q, double b, double abs_tol,
                                   double rel_tol) {
  const double p = q + 1.0;
  if (!(p > 0.0)) throw NumericError("integrate_power_endpoint: needs q > -1");
  auto g = [&](double w) -> T {
    const double y = std::pow(w, 1.0 / p);
    return f(y) * (std::pow(w, 1.0 / p - 1.0) / p);
  };
  return integrate<T>(g, 0.0, std::pow(b, p), abs_tol, rel_tol);
}

}  // namespace quad
}  // namespace jcir
