#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "jcir/quadrature.hpp"

namespace jcir {

class Rng;

using Complex = std::complex<double>;

// A possibly-infinite integral value: `finite == false` means the quantity
// diverges (value is +inf), which callers surface as a flag, not an error.
struct ExtendedReal {
  double value = 0.0;
  bool finite = true;
};

struct PointMass {
  double xi;
  double weight;
  bool operator==(const PointMass&) const = default;
};

// Normalized jump-size density on (0, inf) for compound-Poisson measures.
// `mgf`, when present, evaluates E[e^{w xi}] for Re w <= 0 and lets the
// characteristic-function integrals skip one quadrature level.
// `exponential_rate` is positive exactly when the density is Exp(rate);
// that case admits a closed-form transform exponent.
struct JumpDensity {
  std::string name;
  std::function<double(double)> pdf;
  std::function<double(Rng&)> sample;
  std::function<Complex(Complex)> mgf;
  double exponential_rate = 0.0;
};

JumpDensity exponential_jumps(double rate);
JumpDensity gamma_jumps(double shape, double rate);

// Compound-Poisson view used by samplers: total jump intensity plus a
// jump-size sampler.  For infinite-activity measures this is the
// small-jump-truncated representation.
struct JumpSampler {
  double total_rate = 0.0;
  std::function<double(Rng&)> draw;
};

// Levy measure of the jump part.  Four variants:
//   Zero            -- no jumps
//   PointMasses     -- finitely many atoms (exact sums everywhere)
//   FiniteActivity  -- rate * normalized density
//   InfiniteActivity-- a density n(xi) with possibly infinite total mass;
//                      sampling truncates jumps below eps_trunc
class LevyMeasure {
 public:
  enum class Kind { Zero, PointMasses, FiniteActivity, InfiniteActivity };

  LevyMeasure() : LevyMeasure(Kind::Zero) {}

  static LevyMeasure zero();
  static LevyMeasure point_masses(std::vector<PointMass> points);
  static LevyMeasure finite_activity(double rate, JumpDensity density);
  static LevyMeasure infinite_activity(std::function<double(double)> density,
                                       double eps_trunc = 1e-8,
                                       std::string label = "custom");
  // n(xi) = scale * xi^{-1-alpha} * e^{-decay xi}, alpha in (0,1), decay >= 0.
  static LevyMeasure tempered_stable(double scale, double alpha, double decay,
                                     double eps_trunc = 1e-8);

  Kind kind() const { return kind_; }
  bool is_zero() const { return kind_ == Kind::Zero; }
  const std::string& label() const { return label_; }

  const std::vector<PointMass>& points() const;
  double rate() const;
  const JumpDensity& jump_density() const;
  double eps_trunc() const;
  double density_value(double xi) const;

  // integral of f over (0,1] resp. (1,inf) against nu, with divergence flags.
  ExtendedReal integral_small(const std::function<double(double)>& f, double tol) const;
  ExtendedReal integral_tail(const std::function<double(double)>& f, double tol) const;

  // integral of h over (0,inf) against nu for complex h with h(0+) = 0; used
  // by the characteristic-function exponents.  Throws NumericError when the
  // quadrature cannot converge.
  Complex integral_complex(const std::function<Complex(double)>& h, double tol) const;

  // Lazily built, cached; thread-safe construction.
  const JumpSampler& sampling_view() const;

  // The measure actually sampled from: identity except for InfiniteActivity,
  // which becomes the finite-activity truncation to [eps_trunc, inf).
  LevyMeasure truncated() const;

  // ∫_0^eps xi n(xi) dxi, the per-unit-time mean of dropped small jumps
  // (zero for the finite variants).
  double small_jump_bias_rate() const;

 private:
  struct SamplerCache;
  explicit LevyMeasure(Kind k);

  Kind kind_;
  std::vector<PointMass> points_;
  double rate_ = 0.0;
  JumpDensity density_;
  std::function<double(double)> n_;
  double eps_ = 1e-8;
  std::string label_ = "zero";
  std::shared_ptr<SamplerCache> cache_;
};

// Model parameters: drift a(theta - x), diffusion sigma*sqrt(x), jumps nu.
struct JcirParams {
  double a;
  double theta;
  double sigma;
  LevyMeasure nu;

  JcirParams(double a_, double theta_, double sigma_,
             LevyMeasure nu_ = LevyMeasure::zero());
  double sigma2() const { return sigma * sigma; }
};

struct AdmissibilityReport {
  ExtendedReal int_xi_wedge_one;  // ∫ (xi ∧ 1) nu(dxi)
  ExtendedReal int_tail_xi;       // ∫_(1,inf) xi nu(dxi)
  ExtendedReal int_xi_log_small;  // ∫_(0,1) xi ln(1/xi) nu(dxi)
  ExtendedReal first_moment;      // ∫ xi nu(dxi)
  bool admissible = false;        // wedge integral finite
  bool lemma_log_ok = false;      // admissible and log-moment finite
  bool lemma_tail_ok = false;     // admissible and tail moment finite
  bool theorem_ok = false;        // both
};

AdmissibilityReport check_admissible(const LevyMeasure& nu, double quad_tol = 1e-10);
ExtendedReal first_moment(const LevyMeasure& nu, double quad_tol = 1e-10);
ExtendedReal second_moment(const LevyMeasure& nu, double quad_tol = 1e-10);

}  // namespace jcir
