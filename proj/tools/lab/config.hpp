#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "blowup/nonlinearity.hpp"

namespace lab {

/// Every tunable of one experiment. Text form: see the README section
/// "Configuration".
struct ExperimentConfig {
  // [nonlinearity]
  std::string family = "power";  // power | oscillatory_power | exponential | oscillatory_exponential | tabulated
  double q = 3.0;
  double alpha = 1.0;
  std::string table_path;
  std::string derivative = "closed_form";  // closed_form | finite_difference

  // [asymptotics]
  std::optional<double> t0;
  double quad_rel_tol = 1e-9;
  double tail_cap = 1e8;
  double check_cap = 1e6;
  double window_lo = 1e2;
  double window_hi = 1e6;
  double shift_K = 1.0;
  double shift_p = 5.0;
  double h2_p = 5.0;
  std::optional<double> exp_alpha;
  std::optional<double> gamma;
  int samples_per_decade = 20;

  // [radial]
  int dimension = 2;
  double eps_R = 1e-6;
  double switch_d = 1e-3;
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;

  // [pde]
  int n_r = 64;
  int n_theta = 64;
  double radius = 1.0;
  std::vector<double> truncation{20.0, 40.0, 80.0};
  double eps_b = 0.1;
  int mode = 1;
  double newton_rel_tol = 1e-10;

  // [symmetry]
  std::vector<double> lambdas{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};

  // [maxprinciple]
  double p = 4.0;
  double C0 = 1.0;
  double lambda = 0.95;
  double C_H = 1.0;
  int lens_samples = 64;
  bool refine = true;
  std::string exponent = "full";  // full | half
  double euler_C0 = 1.0;
  double euler_a = 1e-6;
  double euler_b = 0.5;

  // [output]
  std::string dir = "out";

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses the sectioned key = value grammar. Unknown sections or keys,
/// duplicates and invalid values raise blowup::ConfigError with the 1-based
/// line and column of the offending token.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// Canonical text: every section and key in a fixed order, numbers in the
/// shortest form that reads back to the same double.
std::string serialize_config(const ExperimentConfig& cfg);

/// Applies "section.key=value". Errors report line 1 and the column inside
/// the override string.
void apply_override(ExperimentConfig& cfg, std::string_view assignment);

blowup::Nonlinearity make_nonlinearity(const ExperimentConfig& cfg);

/// Shortest round-trip decimal form of x.
std::string format_number(double x);

}  // namespace lab
