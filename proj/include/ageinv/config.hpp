#ifndef AGEINV_CONFIG_HPP
#define AGEINV_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ageinv/grid.hpp"
#include "ageinv/model.hpp"
#include "ageinv/scheme.hpp"

namespace ageinv {

/// Raised on a malformed or inconsistent configuration; the message names
/// the offending key.
class config_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Flat sectioned key-value experiment configuration. Times and steps are
/// validated for grid alignment at parse time.
struct Config {
  // [grid]
  double delta_a = 0.01;
  double a_max = 10.0;
  double p = 2.0;
  std::size_t n = 1;

  // [model]
  double kappa = 1.0;
  std::string beta_profile = "const_on_support";  // or "table"
  double beta_level = 1.5;
  double a_dagger = 2.0;
  std::vector<double> beta_table;
  std::string mu_profile = "const";  // or "table"
  double mu_const = 0.5;
  std::vector<double> mu_table;

  // [scheme]
  SchemeConfig scheme;

  // [run]
  std::uint64_t seed = 0;  // mandatory in files
  std::string u0_profile = "exp";  // exp | const | bump
  double u0_amplitude = 0.05;
  double u0_rate = 1.0;
  std::size_t levels = 4;

  /// Raw "section.key = value" pairs, echoed into reports for provenance.
  std::map<std::string, std::string> echo;

  AgeGrid make_grid() const;
  ModelParams make_model() const;
  GridFunction make_initial_state() const;
};

/// Parses the sectioned key=value format; unknown keys and misaligned
/// times are reported by name.
Config load_config(const std::string& path);

/// Built-in default experiment (the coarse reference configuration).
Config default_config();

}  // namespace ageinv

#endif
