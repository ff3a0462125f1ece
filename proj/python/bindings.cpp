#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <cstdint>
#include <vector>

#include "jcir/charfn.hpp"
#include "jcir/cir.hpp"
#include "jcir/ergodicity.hpp"
#include "jcir/inversion.hpp"
#include "jcir/jumppart.hpp"
#include "jcir/model.hpp"
#include "jcir/rng.hpp"
#include "jcir/simulate.hpp"

namespace py = pybind11;
using namespace jcir;

namespace {

// Thin owning wrapper so python holds one object per parameter set.
struct Model {
  JcirParams p;

  explicit Model(JcirParams params) : p(std::move(params)) {}

  std::complex<double> transform(double t, double x,
                                 std::complex<double> u) const {
    return jcir_cf(t, x, FrequencyPoint(u), p).value;
  }

  std::complex<double> state_coefficient(double t,
                                         std::complex<double> u) const {
    return psi(t, FrequencyPoint(u), p);
  }

  std::complex<double> constant_exponent(double t,
                                         std::complex<double> u) const {
    return phi(t, FrequencyPoint(u), p);
  }

  std::complex<double> stationary_transform(std::complex<double> u) const {
    return invariant_cf(FrequencyPoint(u), p);
  }

  double diffusion_density(double t, double x, double y) const {
    return cir_density(t, x, y, p);
  }

  double mean(double t, double x) const {
    return cir_mean(t, x, p) + z_mean(t, p);
  }

  double jump_intensity(double t) const { return lambda_of_t(t, p); }
  double zero_jump_probability(double t) const { return c_lower(t, p); }
  double jump_mean(double t) const { return z_mean(t, p); }
  double drift_constant() const { return lyapunov_m(p); }

  std::vector<double> sample(double t, double x, int n,
                             std::uint64_t seed) const {
    if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
    ExactSampler sampler(t, p);
    Rng rng = Rng::stream(seed, StreamTag::ExactMarginal, 0);
    std::vector<double> out(static_cast<std::size_t>(n));
    for (auto& v : out) v = sampler.draw(x, rng);
    return out;
  }

  py::dict density(double t, double x, int n_points, int n_terms) const {
    InversionConfig cfg;
    cfg.n_terms = n_terms;
    const auto grid = default_y_grid(t, x, p, n_points);
    const DensityGrid dg = density_from_cf(t, x, grid, p, cfg);
    py::dict out;
    out["y"] = dg.y_grid;
    out["p"] = dg.p_values;
    out["tail_bound"] = dg.inv_error_bound;
    return out;
  }

  py::dict lower_bound(double t, double x, int n_points, int n_terms) const {
    InversionConfig cfg;
    cfg.n_terms = n_terms;
    const auto grid = lower_bound_y_grid(t, x, p, n_points);
    const LowerBoundReport r = lower_bound_check(t, x, grid, p, 1e-6, cfg);
    py::dict out;
    out["y"] = r.y_grid;
    out["p"] = r.p_values;
    out["f"] = r.f_values;
    out["margin"] = r.margin;
    out["c_t"] = r.c_t;
    out["lambda_t"] = r.lambda_t;
    out["min_margin"] = r.min_margin;
    out["violations"] = r.violations;
    return out;
  }

  py::dict ergodic_fit(std::vector<double> x_list, double delta, int n_max,
                       int n_mc, std::uint64_t seed) const {
    const ErgodicityReport r =
        ergodic_rate_fit(x_list, delta, n_max, p, n_mc, seed);
    py::dict out;
    out["beta_hat"] = r.beta_hat;
    out["fit_r2"] = r.fit_r2;
    out["lyapunov_ok"] = r.lyapunov_ok;
    out["m_hat"] = r.m_hat;
    py::list starts;
    for (const ErgodicStartFit& s : r.starts) {
      py::dict d;
      d["x0"] = s.x0;
      d["beta_hat"] = s.beta_hat;
      d["r2"] = s.r2;
      d["n_used"] = s.n_used;
      std::vector<double> tv, se;
      for (const TvPoint& pt : s.series) {
        tv.push_back(pt.tv);
        se.push_back(pt.se);
      }
      d["tv"] = tv;
      d["tv_se"] = se;
      starts.append(d);
    }
    out["starts"] = starts;
    return out;
  }
};

Model make_pure(double a, double theta, double sigma) {
  return Model(JcirParams(a, theta, sigma));
}

Model make_point_masses(double a, double theta, double sigma,
                        std::vector<std::pair<double, double>> points) {
  std::vector<PointMass> pts;
  pts.reserve(points.size());
  for (const auto& [xi, w] : points) pts.push_back({xi, w});
  return Model(JcirParams(a, theta, sigma, LevyMeasure::point_masses(pts)));
}

Model make_exponential_jumps(double a, double theta, double sigma, double rate,
                             double jump_rate) {
  return Model(JcirParams(
      a, theta, sigma,
      LevyMeasure::finite_activity(rate, exponential_jumps(jump_rate))));
}

Model make_gamma_jumps(double a, double theta, double sigma, double rate,
                       double shape, double jump_rate) {
  return Model(JcirParams(
      a, theta, sigma,
      LevyMeasure::finite_activity(rate, gamma_jumps(shape, jump_rate))));
}

Model make_tempered_stable(double a, double theta, double sigma, double scale,
                           double alpha, double decay) {
  return Model(JcirParams(a, theta, sigma,
                          LevyMeasure::tempered_stable(scale, alpha, decay)));
}

}  // namespace

PYBIND11_MODULE(_jcir, m) {
  m.doc() = "Square-root diffusion with jumps: transforms, densities, "
            "sampling, and convergence diagnostics";

  py::register_exception<NumericError>(m, "NumericError");

  py::class_<Model>(m, "Model")
      .def_property_readonly("a", [](const Model& s) { return s.p.a; })
      .def_property_readonly("theta", [](const Model& s) { return s.p.theta; })
      .def_property_readonly("sigma", [](const Model& s) { return s.p.sigma; })
      .def("transform", &Model::transform, py::arg("t"), py::arg("x"),
           py::arg("u"))
      .def("state_coefficient", &Model::state_coefficient, py::arg("t"),
           py::arg("u"))
      .def("constant_exponent", &Model::constant_exponent, py::arg("t"),
           py::arg("u"))
      .def("stationary_transform", &Model::stationary_transform, py::arg("u"))
      .def("diffusion_density", &Model::diffusion_density, py::arg("t"),
           py::arg("x"), py::arg("y"))
      .def("mean", &Model::mean, py::arg("t"), py::arg("x"))
      .def("jump_intensity", &Model::jump_intensity, py::arg("t"))
      .def("zero_jump_probability", &Model::zero_jump_probability,
           py::arg("t"))
      .def("jump_mean", &Model::jump_mean, py::arg("t"))
      .def("drift_constant", &Model::drift_constant)
      .def("sample", &Model::sample, py::arg("t"), py::arg("x"), py::arg("n"),
           py::arg("seed") = 1,
           py::call_guard<py::gil_scoped_release>())
      .def("density", &Model::density, py::arg("t"), py::arg("x"),
           py::arg("n_points") = 256, py::arg("n_terms") = 4096)
      .def("lower_bound", &Model::lower_bound, py::arg("t"), py::arg("x"),
           py::arg("n_points") = 160, py::arg("n_terms") = 4096)
      .def("ergodic_fit", &Model::ergodic_fit, py::arg("x_list"),
           py::arg("delta"), py::arg("n_max"), py::arg("n_mc"),
           py::arg("seed") = 1);

  m.def("pure", &make_pure, py::arg("a"), py::arg("theta"), py::arg("sigma"));
  m.def("with_point_masses", &make_point_masses, py::arg("a"), py::arg("theta"),
        py::arg("sigma"), py::arg("points"));
  m.def("with_exponential_jumps", &make_exponential_jumps, py::arg("a"),
        py::arg("theta"), py::arg("sigma"), py::arg("rate"),
        py::arg("jump_rate"));
  m.def("with_gamma_jumps", &make_gamma_jumps, py::arg("a"), py::arg("theta"),
        py::arg("sigma"), py::arg("rate"), py::arg("shape"),
        py::arg("jump_rate"));
  m.def("with_tempered_stable", &make_tempered_stable, py::arg("a"),
        py::arg("theta"), py::arg("sigma"), py::arg("scale"), py::arg("alpha"),
        py::arg("decay"));
}
