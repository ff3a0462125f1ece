#include "jcir/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "jcir/charfn.hpp"
#include "jcir/ergodicity.hpp"
#include "jcir/inversion.hpp"
#include "jcir/jumppart.hpp"
#include "jcir/rng.hpp"
#include "jcir/simulate.hpp"
#include "jcir/threading.hpp"

namespace jcir {

namespace {

struct ParseCtx {
  int line;
  std::string key;

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("config line " + std::to_string(line) +
                                ", key '" + key + "': " + what);
  }
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(trim(cur));
  return parts;
}

double to_double(const std::string& s, const ParseCtx& ctx) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) ctx.fail("trailing characters in number '" + s + "'");
    return v;
  } catch (const std::invalid_argument&) {
    ctx.fail("not a number: '" + s + "'");
  } catch (const std::out_of_range&) {
    ctx.fail("number out of range: '" + s + "'");
  }
}

int to_int(const std::string& s, const ParseCtx& ctx) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) ctx.fail("trailing characters in integer '" + s + "'");
    if (v < -(1ll << 31) || v > (1ll << 31)) ctx.fail("integer out of range");
    return static_cast<int>(v);
  } catch (const std::invalid_argument&) {
    ctx.fail("not an integer: '" + s + "'");
  } catch (const std::out_of_range&) {
    ctx.fail("integer out of range: '" + s + "'");
  }
}

std::uint64_t to_u64(const std::string& s, const ParseCtx& ctx) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) ctx.fail("trailing characters in integer '" + s + "'");
    return v;
  } catch (const std::invalid_argument&) {
    ctx.fail("not an integer: '" + s + "'");
  } catch (const std::out_of_range&) {
    ctx.fail("integer out of range: '" + s + "'");
  }
}

std::vector<double> to_double_list(const std::string& s, const ParseCtx& ctx) {
  std::vector<double> out;
  for (const std::string& part : split(s, ',')) {
    if (part.empty()) ctx.fail("empty element in list '" + s + "'");
    out.push_back(to_double(part, ctx));
  }
  return out;
}

std::vector<PointMass> to_points(const std::string& s, const ParseCtx& ctx) {
  std::vector<PointMass> out;
  for (const std::string& part : split(s, ',')) {
    const auto colon = part.find(':');
    if (colon == std::string::npos) {
      ctx.fail("point '" + part + "' must be xi:weight");
    }
    const double xi = to_double(trim(part.substr(0, colon)), ctx);
    const double w = to_double(trim(part.substr(colon + 1)), ctx);
    out.push_back({xi, w});
  }
  return out;
}

using Setter =
    std::function<void(RunConfig&, const std::string&, const ParseCtx&)>;
using SectionTable = std::map<std::string, Setter>;

#define JC_DOUBLE(field) \
  [](RunConfig& c, const std::string& v, const ParseCtx& x) { c.field = to_double(v, x); }
#define JC_INT(field) \
  [](RunConfig& c, const std::string& v, const ParseCtx& x) { c.field = to_int(v, x); }
#define JC_STRING(field) \
  [](RunConfig& c, const std::string& v, const ParseCtx&) { c.field = v; }
#define JC_DLIST(field) \
  [](RunConfig& c, const std::string& v, const ParseCtx& x) { c.field = to_double_list(v, x); }

const std::map<std::string, SectionTable>& schema() {
  static const std::map<std::string, SectionTable> tables = {
      {"model",
       {{"a", JC_DOUBLE(a)},
        {"theta", JC_DOUBLE(theta)},
        {"sigma", JC_DOUBLE(sigma)}}},
      {"jumps",
       {{"kind", JC_STRING(jump_kind)},
        {"points",
         [](RunConfig& c, const std::string& v, const ParseCtx& x) {
           c.jump_points = to_points(v, x);
         }},
        {"rate",
         [](RunConfig& c, const std::string& v, const ParseCtx& x) {
           c.jump_rate = to_double(v, x);
         }},
        {"density", JC_STRING(jump_density)},
        {"exp_rate", JC_DOUBLE(exp_rate)},
        {"gamma_shape", JC_DOUBLE(gamma_shape)},
        {"gamma_rate", JC_DOUBLE(gamma_rate)},
        {"infinite_density", JC_STRING(infinite_density)},
        {"ts_scale", JC_DOUBLE(ts_scale)},
        {"ts_alpha", JC_DOUBLE(ts_alpha)},
        {"ts_decay", JC_DOUBLE(ts_decay)},
        {"eps_trunc", JC_DOUBLE(eps_trunc)}}},
      {"run",
       {{"command", JC_STRING(command)},
        {"seed",
         [](RunConfig& c, const std::string& v, const ParseCtx& x) {
           c.seed = to_u64(v, x);
         }},
        {"output", JC_STRING(output)},
        {"threads", JC_INT(threads)}}},
      {"cf",
       {{"t", JC_DOUBLE(cf_t)},
        {"x", JC_DOUBLE(cf_x)},
        {"u_im_max", JC_DOUBLE(cf_u_im_max)},
        {"n_u", JC_INT(cf_n_u)}}},
      {"simulate",
       {{"x0", JC_DOUBLE(sim_x0)},
        {"horizon", JC_DOUBLE(sim_horizon)},
        {"dt", JC_DOUBLE(sim_dt)},
        {"n_paths", JC_INT(sim_n_paths)}}},
      {"skeleton",
       {{"x0", JC_DOUBLE(skel_x0)},
        {"delta", JC_DOUBLE(skel_delta)},
        {"n_steps", JC_INT(skel_n_steps)}}},
      {"density",
       {{"t", JC_DOUBLE(den_t)},
        {"x", JC_DOUBLE(den_x)},
        {"n_points", JC_INT(den_n_points)},
        {"n_terms", JC_INT(den_n_terms)},
        {"span_l", JC_DOUBLE(den_span_l)}}},
      {"lowerbound",
       {{"t_list", JC_DLIST(lb_t_list)},
        {"x_list", JC_DLIST(lb_x_list)},
        {"n_points", JC_INT(lb_n_points)},
        {"n_terms", JC_INT(lb_n_terms)},
        {"tol", JC_DOUBLE(lb_tol)}}},
      {"ergodicity",
       {{"x_list", JC_DLIST(erg_x_list)},
        {"delta", JC_DOUBLE(erg_delta)},
        {"n_max", JC_INT(erg_n_max)},
        {"n_mc", JC_INT(erg_n_mc)}}},
  };
  return tables;
}

#undef JC_DOUBLE
#undef JC_INT
#undef JC_STRING
#undef JC_DLIST

[[noreturn]] void fail_key(const std::string& key, const std::string& what) {
  throw std::invalid_argument("config key '" + key + "': " + what);
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) fail_key(key, what);
}

void validate(const RunConfig& c) {
  require(std::isfinite(c.a) && c.a > 0.0, "model.a", "must satisfy a > 0");
  require(std::isfinite(c.theta) && c.theta >= 0.0, "model.theta",
          "must satisfy theta >= 0");
  require(std::isfinite(c.sigma) && c.sigma > 0.0, "model.sigma",
          "must satisfy sigma > 0");

  if (c.jump_kind == "zero") {
  } else if (c.jump_kind == "point_masses") {
    require(!c.jump_points.empty(), "jumps.points",
            "required for kind = point_masses");
    for (const PointMass& pm : c.jump_points) {
      require(pm.xi > 0.0 && pm.weight > 0.0, "jumps.points",
              "every xi and weight must be > 0");
    }
  } else if (c.jump_kind == "finite_activity") {
    require(c.jump_rate.has_value(), "jumps.rate",
            "missing key, required for kind = finite_activity");
    require(*c.jump_rate > 0.0, "jumps.rate", "must satisfy rate > 0");
    if (c.jump_density == "exponential") {
      require(c.exp_rate > 0.0, "jumps.exp_rate", "must satisfy exp_rate > 0");
    } else if (c.jump_density == "gamma") {
      require(c.gamma_shape > 0.0 && c.gamma_rate > 0.0, "jumps.gamma_shape",
              "gamma_shape and gamma_rate must be > 0");
    } else {
      fail_key("jumps.density",
               "unknown density '" + c.jump_density +
                   "' (expected exponential or gamma)");
    }
  } else if (c.jump_kind == "infinite_activity") {
    require(c.infinite_density == "tempered_stable", "jumps.infinite_density",
            "unknown density '" + c.infinite_density +
                "' (expected tempered_stable)");
    require(c.ts_scale > 0.0, "jumps.ts_scale", "must satisfy ts_scale > 0");
    require(c.ts_alpha > 0.0 && c.ts_alpha < 1.0, "jumps.ts_alpha",
            "must lie in (0, 1)");
    require(c.ts_decay >= 0.0, "jumps.ts_decay", "must satisfy ts_decay >= 0");
    require(c.eps_trunc > 0.0, "jumps.eps_trunc",
            "must satisfy eps_trunc > 0");
  } else {
    fail_key("jumps.kind",
             "unknown kind '" + c.jump_kind +
                 "' (expected zero, point_masses, finite_activity, or "
                 "infinite_activity)");
  }

  static const char* commands[] = {"check",   "cf",         "simulate",
                                   "skeleton", "density",    "lowerbound",
                                   "ergodicity"};
  bool known = false;
  for (const char* cmd : commands) known = known || c.command == cmd;
  require(known, "run.command", "unknown command '" + c.command + "'");
  require(c.threads >= 0, "run.threads", "must satisfy threads >= 0");

  require(c.cf_t > 0.0, "cf.t", "must satisfy t > 0");
  require(c.cf_x >= 0.0, "cf.x", "must satisfy x >= 0");
  require(c.cf_u_im_max > 0.0, "cf.u_im_max", "must satisfy u_im_max > 0");
  require(c.cf_n_u >= 1, "cf.n_u", "must satisfy n_u >= 1");

  require(c.sim_x0 >= 0.0, "simulate.x0", "must satisfy x0 >= 0");
  require(c.sim_horizon > 0.0, "simulate.horizon",
          "must satisfy horizon > 0");
  require(c.sim_dt > 0.0 && c.sim_dt <= c.sim_horizon, "simulate.dt",
          "must satisfy 0 < dt <= horizon");
  require(c.sim_n_paths >= 1, "simulate.n_paths",
          "must satisfy n_paths >= 1");

  require(c.skel_x0 >= 0.0, "skeleton.x0", "must satisfy x0 >= 0");
  require(c.skel_delta > 0.0, "skeleton.delta", "must satisfy delta > 0");
  require(c.skel_n_steps >= 1, "skeleton.n_steps",
          "must satisfy n_steps >= 1");

  require(c.den_t > 0.0, "density.t", "must satisfy t > 0");
  require(c.den_x >= 0.0, "density.x", "must satisfy x >= 0");
  require(c.den_n_points >= 2, "density.n_points",
          "must satisfy n_points >= 2");
  require(c.den_n_terms >= 16 && c.den_n_terms <= (1 << 22),
          "density.n_terms", "must lie in [16, 2^22]");
  require(c.den_span_l > 0.0, "density.span_l", "must satisfy span_l > 0");

  require(!c.lb_t_list.empty(), "lowerbound.t_list", "must be non-empty");
  for (double t : c.lb_t_list) {
    require(t > 0.0, "lowerbound.t_list", "every t must be > 0");
  }
  require(!c.lb_x_list.empty(), "lowerbound.x_list", "must be non-empty");
  for (double x : c.lb_x_list) {
    require(x >= 0.0, "lowerbound.x_list", "every x must be >= 0");
  }
  require(c.lb_n_points >= 2, "lowerbound.n_points",
          "must satisfy n_points >= 2");
  require(c.lb_n_terms >= 16 && c.lb_n_terms <= (1 << 22),
          "lowerbound.n_terms", "must lie in [16, 2^22]");
  require(c.lb_tol > 0.0, "lowerbound.tol", "must satisfy tol > 0");

  require(!c.erg_x_list.empty(), "ergodicity.x_list", "must be non-empty");
  for (double x : c.erg_x_list) {
    require(x >= 0.0, "ergodicity.x_list", "every x must be >= 0");
  }
  require(c.erg_delta > 0.0, "ergodicity.delta", "must satisfy delta > 0");
  require(c.erg_n_max >= 3, "ergodicity.n_max", "must satisfy n_max >= 3");
  require(c.erg_n_mc >= 100, "ergodicity.n_mc", "must satisfy n_mc >= 100");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw std::invalid_argument("config line " + std::to_string(line_no) +
                                    ": unterminated section header '" + line +
                                    "'");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (schema().find(section) == schema().end()) {
        throw std::invalid_argument("config line " + std::to_string(line_no) +
                                    ": unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key = value, got '" + line +
                                  "'");
    }
    if (section.empty()) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": key outside any section");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const SectionTable& table = schema().at(section);
    const auto it = table.find(key);
    if (it == table.end()) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": unknown key '" + key + "' in section [" +
                                  section + "]");
    }
    it->second(cfg, value, ParseCtx{line_no, section + "." + key});
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open config file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string join_doubles(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += format_double(v[i]);
  }
  return out;
}

std::string join_points(const std::vector<PointMass>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += format_double(v[i].xi) + ":" + format_double(v[i].weight);
  }
  return out;
}

}  // namespace

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "[model]\n";
  out << "a = " << format_double(c.a) << "\n";
  out << "theta = " << format_double(c.theta) << "\n";
  out << "sigma = " << format_double(c.sigma) << "\n";
  out << "[jumps]\n";
  out << "kind = " << c.jump_kind << "\n";
  if (!c.jump_points.empty()) {
    out << "points = " << join_points(c.jump_points) << "\n";
  }
  if (c.jump_rate) out << "rate = " << format_double(*c.jump_rate) << "\n";
  out << "density = " << c.jump_density << "\n";
  out << "exp_rate = " << format_double(c.exp_rate) << "\n";
  out << "gamma_shape = " << format_double(c.gamma_shape) << "\n";
  out << "gamma_rate = " << format_double(c.gamma_rate) << "\n";
  out << "infinite_density = " << c.infinite_density << "\n";
  out << "ts_scale = " << format_double(c.ts_scale) << "\n";
  out << "ts_alpha = " << format_double(c.ts_alpha) << "\n";
  out << "ts_decay = " << format_double(c.ts_decay) << "\n";
  out << "eps_trunc = " << format_double(c.eps_trunc) << "\n";
  out << "[run]\n";
  out << "command = " << c.command << "\n";
  out << "seed = " << c.seed << "\n";
  if (!c.output.empty()) out << "output = " << c.output << "\n";
  out << "threads = " << c.threads << "\n";
  out << "[cf]\n";
  out << "t = " << format_double(c.cf_t) << "\n";
  out << "x = " << format_double(c.cf_x) << "\n";
  out << "u_im_max = " << format_double(c.cf_u_im_max) << "\n";
  out << "n_u = " << c.cf_n_u << "\n";
  out << "[simulate]\n";
  out << "x0 = " << format_double(c.sim_x0) << "\n";
  out << "horizon = " << format_double(c.sim_horizon) << "\n";
  out << "dt = " << format_double(c.sim_dt) << "\n";
  out << "n_paths = " << c.sim_n_paths << "\n";
  out << "[skeleton]\n";
  out << "x0 = " << format_double(c.skel_x0) << "\n";
  out << "delta = " << format_double(c.skel_delta) << "\n";
  out << "n_steps = " << c.skel_n_steps << "\n";
  out << "[density]\n";
  out << "t = " << format_double(c.den_t) << "\n";
  out << "x = " << format_double(c.den_x) << "\n";
  out << "n_points = " << c.den_n_points << "\n";
  out << "n_terms = " << c.den_n_terms << "\n";
  out << "span_l = " << format_double(c.den_span_l) << "\n";
  out << "[lowerbound]\n";
  out << "t_list = " << join_doubles(c.lb_t_list) << "\n";
  out << "x_list = " << join_doubles(c.lb_x_list) << "\n";
  out << "n_points = " << c.lb_n_points << "\n";
  out << "n_terms = " << c.lb_n_terms << "\n";
  out << "tol = " << format_double(c.lb_tol) << "\n";
  out << "[ergodicity]\n";
  out << "x_list = " << join_doubles(c.erg_x_list) << "\n";
  out << "delta = " << format_double(c.erg_delta) << "\n";
  out << "n_max = " << c.erg_n_max << "\n";
  out << "n_mc = " << c.erg_n_mc << "\n";
  return out.str();
}

JcirParams build_params(const RunConfig& c) {
  LevyMeasure nu;
  if (c.jump_kind == "zero") {
    nu = LevyMeasure::zero();
  } else if (c.jump_kind == "point_masses") {
    nu = LevyMeasure::point_masses(c.jump_points);
  } else if (c.jump_kind == "finite_activity") {
    const JumpDensity density = c.jump_density == "exponential"
                                    ? exponential_jumps(c.exp_rate)
                                    : gamma_jumps(c.gamma_shape, c.gamma_rate);
    nu = LevyMeasure::finite_activity(*c.jump_rate, density);
  } else {
    nu = LevyMeasure::tempered_stable(c.ts_scale, c.ts_alpha, c.ts_decay,
                                      c.eps_trunc);
  }
  return JcirParams(c.a, c.theta, c.sigma, nu);
}

namespace {

void write_provenance(std::ostream& out, const RunConfig& cfg) {
  std::istringstream lines(serialize_config(cfg));
  std::string line;
  while (std::getline(lines, line)) out << "# cfg: " << line << "\n";
}

std::string flag(bool b) { return b ? "1" : "0"; }

std::string extended(const ExtendedReal& v) {
  return v.finite ? format_double(v.value) : "inf";
}

void run_check(const JcirParams& p, std::ostream& out) {
  const AdmissibilityReport r = check_admissible(p.nu);
  out << "int_xi_wedge_one,int_tail_xi,int_xi_log_small,first_moment,"
         "admissible,log_moment_ok,tail_moment_ok,ergodic_hypotheses_ok\n";
  out << extended(r.int_xi_wedge_one) << "," << extended(r.int_tail_xi) << ","
      << extended(r.int_xi_log_small) << "," << extended(r.first_moment) << ","
      << flag(r.admissible) << "," << flag(r.lemma_log_ok) << ","
      << flag(r.lemma_tail_ok) << "," << flag(r.theorem_ok) << "\n";
}

void run_cf(const RunConfig& cfg, const JcirParams& p, std::ostream& out) {
  out << "t,re_u,im_u,re_phi,im_phi,re_psi,im_psi,re_cf,im_cf\n";
  for (int k = 1; k <= cfg.cf_n_u; ++k) {
    const double im = cfg.cf_u_im_max * k / cfg.cf_n_u;
    const FrequencyPoint u(Complex(0.0, im));
    const CfValue v = jcir_cf(cfg.cf_t, cfg.cf_x, u, p);
    out << format_double(cfg.cf_t) << "," << format_double(0.0) << ","
        << format_double(im) << "," << format_double(v.phi.real()) << ","
        << format_double(v.phi.imag()) << "," << format_double(v.psi.real())
        << "," << format_double(v.psi.imag()) << ","
        << format_double(v.value.real()) << "," << format_double(v.value.imag())
        << "\n";
  }
}

void run_simulate(const RunConfig& cfg, const JcirParams& p,
                  std::ostream& out) {
  out << "path_id,time,state\n";
  const PathConfig pc(cfg.sim_x0, cfg.sim_horizon, cfg.sim_dt, cfg.seed);
  for (int pid = 0; pid < cfg.sim_n_paths; ++pid) {
    const std::vector<PathPoint> path =
        euler_path(pc, p, static_cast<std::uint64_t>(pid));
    for (const PathPoint& pt : path) {
      out << pid << "," << format_double(pt.time) << ","
          << format_double(pt.state) << "\n";
    }
  }
}

void run_skeleton(const RunConfig& cfg, const JcirParams& p,
                  std::ostream& out) {
  out << "step,time,state\n";
  Rng rng = Rng::stream(cfg.seed, StreamTag::Skeleton, 0);
  const SkeletonChain chain =
      skeleton_chain(cfg.skel_x0, cfg.skel_delta, cfg.skel_n_steps, p, rng);
  for (std::size_t i = 0; i < chain.states.size(); ++i) {
    out << i << "," << format_double(static_cast<double>(i) * chain.delta)
        << "," << format_double(chain.states[i]) << "\n";
  }
}

void write_bound_rows(const LowerBoundReport& r, std::ostream& out) {
  for (std::size_t i = 0; i < r.y_grid.size(); ++i) {
    out << format_double(r.t) << "," << format_double(r.x) << ","
        << format_double(r.y_grid[i]) << "," << format_double(r.p_values[i])
        << "," << format_double(r.f_values[i]) << "," << format_double(r.c_t)
        << "," << format_double(r.margin[i]) << "\n";
  }
}

void run_density(const RunConfig& cfg, const JcirParams& p,
                 std::ostream& out) {
  InversionConfig icfg;
  icfg.n_terms = cfg.den_n_terms;
  icfg.span_l = cfg.den_span_l;
  const std::vector<double> grid = default_y_grid(
      cfg.den_t, cfg.den_x, p, cfg.den_n_points, cfg.den_span_l);
  const LowerBoundReport r =
      lower_bound_check(cfg.den_t, cfg.den_x, grid, p, 1e-6, icfg);
  out << "t,x,y,p,f,c_t,margin\n";
  write_bound_rows(r, out);
}

void run_lowerbound(const RunConfig& cfg, const JcirParams& p,
                    std::ostream& out) {
  InversionConfig icfg;
  icfg.n_terms = cfg.lb_n_terms;
  out << "t,x,y,p,f,c_t,margin\n";
  for (double t : cfg.lb_t_list) {
    for (double x : cfg.lb_x_list) {
      const std::vector<double> grid =
          lower_bound_y_grid(t, x, p, cfg.lb_n_points);
      const LowerBoundReport r =
          lower_bound_check(t, x, grid, p, cfg.lb_tol, icfg);
      write_bound_rows(r, out);
    }
  }
}

void run_ergodicity(const RunConfig& cfg, const JcirParams& p,
                    std::ostream& out) {
  const ErgodicityReport r = ergodic_rate_fit(
      cfg.erg_x_list, cfg.erg_delta, cfg.erg_n_max, p, cfg.erg_n_mc, cfg.seed);
  out << "kind,x0,n,t,tv_hat,tv_se,beta_hat,intercept,slope_se,fit_r2,n_used,"
         "lyapunov_ok,m_hat\n";
  for (const ErgodicStartFit& s : r.starts) {
    for (const TvPoint& pt : s.series) {
      out << "tv," << format_double(s.x0) << "," << pt.n << ","
          << format_double(pt.t) << "," << format_double(pt.tv) << ","
          << format_double(pt.se) << ",,,,,,,\n";
    }
  }
  for (const ErgodicStartFit& s : r.starts) {
    out << "fit," << format_double(s.x0) << ",,,,,"
        << format_double(s.beta_hat) << "," << format_double(s.intercept)
        << "," << format_double(s.slope_se) << "," << format_double(s.r2)
        << "," << s.n_used << ",,\n";
  }
  out << "summary,,,,,," << format_double(r.beta_hat) << ",,,"
      << format_double(r.fit_r2) << ",," << flag(r.lyapunov_ok) << ","
      << format_double(r.m_hat) << "\n";
}

}  // namespace

void run_command(const RunConfig& cfg, std::ostream& out) {
  set_max_threads(cfg.threads);
  const JcirParams p = build_params(cfg);
  write_provenance(out, cfg);
  if (cfg.command == "check") {
    run_check(p, out);
  } else if (cfg.command == "cf") {
    run_cf(cfg, p, out);
  } else if (cfg.command == "simulate") {
    run_simulate(cfg, p, out);
  } else if (cfg.command == "skeleton") {
    run_skeleton(cfg, p, out);
  } else if (cfg.command == "density") {
    run_density(cfg, p, out);
  } else if (cfg.command == "lowerbound") {
    run_lowerbound(cfg, p, out);
  } else if (cfg.command == "ergodicity") {
    run_ergodicity(cfg, p, out);
  } else {
    throw std::invalid_argument("unknown command '" + cfg.command + "'");
  }
  out.flush();
  if (!out) throw NumericError("write failed");
}

int run(const RunConfig& cfg) {
  try {
    if (cfg.output.empty()) {
      run_command(cfg, std::cout);
    } else {
      std::ofstream out(cfg.output, std::ios::binary);
      if (!out) {
        throw std::invalid_argument("cannot open output file '" + cfg.output +
                                    "'");
      }
      run_command(cfg, out);
    }
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace jcir
