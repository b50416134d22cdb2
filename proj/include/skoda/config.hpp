#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "skoda/division.hpp"
#include "skoda/poly.hpp"
#include "skoda/psh_weight.hpp"
#include "skoda/quadrature.hpp"
#include "skoda/sweeps.hpp"

namespace skoda {

/// Malformed or invalid configuration. The message names the offending
/// field as a JSON path, or the line and column for syntax errors.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fully resolved run parameters; every default is filled in.
struct RunConfig {
  int nvars = 0;  ///< 0 when no polynomial input was given
  std::vector<MultiPoly> generators;
  std::optional<MultiPoly> f;
  double gamma = 1.0;
  PshWeight psi;
  PshWeight phi;
  Domain domain;
  int radial = 0;
  int angular = 0;
  int degree = 2;
  Variant variant = Variant::Skoda;
  std::optional<std::size_t> sweep_count;  ///< per-command default when absent
  SweepSpec sweep;
  int m0 = 1;
  int N0 = 1;
  std::map<std::string, double> tolerances;  ///< overrides keyed by check name
};

/// Command-line overrides applied after the file is read.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::pair<int, int>> grid;
  std::optional<int> degree;
};

/// Default radial x angular resolution per complex dimension count.
std::pair<int, int> default_grid(int nvars);

RunConfig parse_config(const nlohmann::json& j, const Overrides& o = {});
RunConfig parse_config_text(const std::string& text, const Overrides& o = {});
RunConfig load_config(const std::string& path, const Overrides& o = {});

/// "RxA" -> (R, A); throws ConfigError on anything else.
std::pair<int, int> parse_grid_flag(const std::string& s);

/// Term-list literal [{"coeff": [re, im], "exps": [...]}] in exponent order.
nlohmann::ordered_json poly_to_json(const MultiPoly& p);
MultiPoly poly_from_json(const nlohmann::json& j, int nvars, const std::string& path);

/// The resolved configuration as written into reports.
nlohmann::ordered_json config_to_json(const RunConfig& c);

}  // namespace skoda
