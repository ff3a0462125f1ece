#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "jcir/model.hpp"

namespace jcir {

// Parsed form of the sectioned key=value run file.  Every key has a
// documented default except jumps.rate and jumps.points, which are required
// by the variants that use them.
struct RunConfig {
  // [model]
  double a = 1.0;
  double theta = 1.0;
  double sigma = 1.0;

  // [jumps]
  std::string jump_kind = "zero";  // zero | point_masses | finite_activity |
                                   // infinite_activity
  std::vector<PointMass> jump_points;         // "xi:weight, xi:weight, ..."
  std::optional<double> jump_rate;            // finite_activity only
  std::string jump_density = "exponential";   // exponential | gamma
  double exp_rate = 1.0;
  double gamma_shape = 1.0;
  double gamma_rate = 1.0;
  std::string infinite_density = "tempered_stable";
  double ts_scale = 1.0;
  double ts_alpha = 0.5;
  double ts_decay = 1.0;
  double eps_trunc = 1e-8;

  // [run]
  std::string command = "check";  // check | cf | simulate | skeleton |
                                  // density | lowerbound | ergodicity
  std::uint64_t seed = 1;
  std::string output;  // empty writes to stdout
  int threads = 0;     // 0 uses the hardware default

  // [cf]
  double cf_t = 1.0;
  double cf_x = 1.0;
  double cf_u_im_max = 10.0;
  int cf_n_u = 64;

  // [simulate]
  double sim_x0 = 1.0;
  double sim_horizon = 1.0;
  double sim_dt = 0.01;
  int sim_n_paths = 1;

  // [skeleton]
  double skel_x0 = 1.0;
  double skel_delta = 0.1;
  int skel_n_steps = 100;

  // [density]
  double den_t = 1.0;
  double den_x = 1.0;
  int den_n_points = 512;
  int den_n_terms = 4096;
  double den_span_l = 12.0;

  // [lowerbound]
  std::vector<double> lb_t_list{1.0};
  std::vector<double> lb_x_list{1.0};
  int lb_n_points = 160;
  int lb_n_terms = 4096;
  double lb_tol = 1e-6;

  // [ergodicity]
  std::vector<double> erg_x_list{0.0, 10.0};
  double erg_delta = 0.25;
  int erg_n_max = 12;
  int erg_n_mc = 20000;

  bool operator==(const RunConfig&) const = default;
};

// Parses and fully validates the config text.  The first problem throws
// std::invalid_argument naming the line number and key.
RunConfig parse_config(const std::string& text);

RunConfig load_config(const std::string& path);

// Canonical text form: emits every section and every key (required optionals
// only when set), with doubles at full precision, so parse(serialize(c)) == c.
std::string serialize_config(const RunConfig& cfg);

// Model parameters for the configured process, including the jump measure.
JcirParams build_params(const RunConfig& cfg);

// Full-precision decimal form used for every CSV number.
std::string format_double(double v);

// Dispatches cfg.command and writes its CSV (prefixed with "# cfg:" comment
// lines that embed the serialized config) to `out`.  Throws on failure; the
// int overload maps exceptions to exit codes instead: 0 success,
// 1 validation error, 2 numerical failure.
void run_command(const RunConfig& cfg, std::ostream& out);
int run(const RunConfig& cfg);

}  // namespace jcir
