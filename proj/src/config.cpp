#include "skoda/config.hpp"

#include <cmath>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "skoda/errors.hpp"

namespace skoda {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ConfigError(path + ": " + what); }

void require_object(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) fail(path.empty() ? key : path + "." + key, "unknown field");
  }
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "must be finite");
  return v;
}

int integer(const json& j, const std::string& path, int lo) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  const auto v = j.get<long long>();
  if (v < lo || v > 1'000'000'000) fail(path, "must be an integer >= " + std::to_string(lo));
  return static_cast<int>(v);
}

cplx coefficient(const json& j, const std::string& path) {
  if (j.is_number()) return {number(j, path), 0.0};
  if (!j.is_array() || j.size() != 2) fail(path, "expected a number or [re, im]");
  return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
}

/// Variable count implied by the first term of a polynomial literal, or 0.
int infer_nvars(const json& poly) {
  if (!poly.is_array()) return 0;
  for (const auto& t : poly) {
    if (t.is_object() && t.contains("exps") && t["exps"].is_array()) return static_cast<int>(t["exps"].size());
  }
  return 0;
}

PshWeight weight_from_json(const json& j, int nvars, const std::string& path) {
  require_object(j, path, {"c0", "c1", "logs"});
  const double c0 = j.contains("c0") ? number(j["c0"], path + ".c0") : 0.0;
  const double c1 = j.contains("c1") ? number(j["c1"], path + ".c1") : 0.0;
  if (c1 < 0.0) fail(path + ".c1", "must be >= 0");
  std::vector<LogTerm> logs;
  if (j.contains("logs")) {
    if (!j["logs"].is_array()) fail(path + ".logs", "expected an array");
    for (std::size_t i = 0; i < j["logs"].size(); ++i) {
      const std::string lp = path + ".logs[" + std::to_string(i) + "]";
      const json& t = j["logs"][i];
      require_object(t, lp, {"kappa", "eps", "poly"});
      if (!t.contains("poly")) fail(lp + ".poly", "required");
      LogTerm term;
      term.kappa = t.contains("kappa") ? number(t["kappa"], lp + ".kappa") : 1.0;
      term.eps = t.contains("eps") ? number(t["eps"], lp + ".eps") : 1.0;
      if (term.kappa < 0.0) fail(lp + ".kappa", "must be >= 0");
      if (!(term.eps > 0.0)) fail(lp + ".eps", "must be > 0");
      term.poly = poly_from_json(t["poly"], nvars, lp + ".poly");
      logs.push_back(std::move(term));
    }
  }
  return PshWeight(nvars, c0, c1, std::move(logs));
}

ordered_json weight_to_json(const PshWeight& w) {
  ordered_json logs = ordered_json::array();
  for (const auto& t : w.logs()) logs.push_back({{"kappa", t.kappa}, {"eps", t.eps}, {"poly", poly_to_json(t.poly)}});
  return {{"c0", w.c0()}, {"c1", w.c1()}, {"logs", logs}};
}

}  // namespace

std::pair<int, int> default_grid(int nvars) {
  if (nvars <= 1) return {128, 64};
  if (nvars == 2) return {16, 8};
  return {8, 4};
}

MultiPoly poly_from_json(const json& j, int nvars, const std::string& path) {
  if (!j.is_array()) fail(path, "expected a term list [{\"coeff\": [re, im], \"exps\": [...]}]");
  MultiPoly p(nvars);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string tp = path + "[" + std::to_string(i) + "]";
    const json& t = j[i];
    require_object(t, tp, {"coeff", "exps"});
    if (!t.contains("coeff")) fail(tp + ".coeff", "required");
    if (!t.contains("exps") || !t["exps"].is_array()) fail(tp + ".exps", "required array of exponents");
    if (static_cast<int>(t["exps"].size()) != nvars) {
      fail(tp + ".exps", "has " + std::to_string(t["exps"].size()) + " entries, expected " + std::to_string(nvars));
    }
    Exponent e(nvars);
    for (int k = 0; k < nvars; ++k) e[k] = integer(t["exps"][k], tp + ".exps[" + std::to_string(k) + "]", 0);
    p.add_term(e, coefficient(t["coeff"], tp + ".coeff"));
  }
  return p;
}

ordered_json poly_to_json(const MultiPoly& p) {
  ordered_json out = ordered_json::array();
  for (const auto& [e, c] : p.terms()) out.push_back({{"coeff", {c.real(), c.imag()}}, {"exps", e}});
  return out;
}

std::pair<int, int> parse_grid_flag(const std::string& s) {
  static const std::regex re(R"(^\s*(\d+)\s*[xX]\s*(\d+)\s*$)");
  std::smatch m;
  if (!std::regex_match(s, m, re)) throw ConfigError("--grid: expected <radial>x<angular>, got '" + s + "'");
  const int r = std::stoi(m[1]);
  const int a = std::stoi(m[2]);
  if (r < 2 || a < 2) throw ConfigError("--grid: both counts must be >= 2");
  return {r, a};
}

RunConfig parse_config(const json& j, const Overrides& o) {
  require_object(j, "", {"nvars", "generators", "f", "gamma", "psi", "phi", "domain", "grid", "degree", "variant",
                         "sweep", "iterate", "tolerances"});
  RunConfig c;

  if (j.contains("nvars")) c.nvars = integer(j["nvars"], "nvars", 1);
  if (c.nvars == 0 && j.contains("generators") && j["generators"].is_array()) {
    for (const auto& g : j["generators"]) {
      if ((c.nvars = infer_nvars(g)) > 0) break;
    }
  }
  if (c.nvars == 0 && j.contains("f")) c.nvars = infer_nvars(j["f"]);
  if (c.nvars == 0 && j.contains("domain") && j["domain"].is_object() && j["domain"].contains("radii") &&
      j["domain"]["radii"].is_array()) {
    c.nvars = static_cast<int>(j["domain"]["radii"].size());
  }
  if (c.nvars == 0 && (j.contains("generators") || j.contains("f"))) {
    fail("nvars", "cannot infer the variable count; give \"nvars\" or a term with \"exps\"");
  }
  const int n = std::max(c.nvars, 1);

  if (j.contains("generators")) {
    const json& g = j["generators"];
    if (!g.is_array() || g.empty()) fail("generators", "expected a non-empty array of polynomials");
    for (std::size_t i = 0; i < g.size(); ++i) {
      c.generators.push_back(poly_from_json(g[i], n, "generators[" + std::to_string(i) + "]"));
    }
    try {
      GeneratorSystem check(c.generators);
    } catch (const std::exception& e) {
      fail("generators", e.what());
    }
  }
  if (j.contains("f")) c.f = poly_from_json(j["f"], n, "f");

  if (j.contains("gamma")) {
    c.gamma = number(j["gamma"], "gamma");
    if (!(c.gamma > 0.0)) fail("gamma", "must be > 0, got " + std::to_string(c.gamma));
  }
  try {
    c.psi = j.contains("psi") ? weight_from_json(j["psi"], n, "psi") : PshWeight::zero(n);
    c.phi = j.contains("phi") ? weight_from_json(j["phi"], n, "phi") : PshWeight::zero(n);
  } catch (const DomainError& e) {
    fail("psi/phi", e.what());
  }

  c.domain = Domain::unit_polydisc(n);
  if (j.contains("domain")) {
    const json& d = j["domain"];
    require_object(d, "domain", {"radii", "center"});
    if (d.contains("radii")) {
      if (!d["radii"].is_array() || static_cast<int>(d["radii"].size()) != n) {
        fail("domain.radii", "expected " + std::to_string(n) + " radii");
      }
      for (int k = 0; k < n; ++k) {
        const std::string rp = "domain.radii[" + std::to_string(k) + "]";
        c.domain.radii[k] = number(d["radii"][k], rp);
        if (!(c.domain.radii[k] > 0.0)) fail(rp, "must be > 0");
      }
    }
    if (d.contains("center")) {
      if (!d["center"].is_array() || static_cast<int>(d["center"].size()) != n) {
        fail("domain.center", "expected " + std::to_string(n) + " complex coordinates");
      }
      for (int k = 0; k < n; ++k) c.domain.center[k] = coefficient(d["center"][k], "domain.center[" + std::to_string(k) + "]");
    }
  }

  std::tie(c.radial, c.angular) = default_grid(c.nvars);
  if (j.contains("grid")) {
    const json& g = j["grid"];
    require_object(g, "grid", {"radial", "angular"});
    if (g.contains("radial")) c.radial = integer(g["radial"], "grid.radial", 2);
    if (g.contains("angular")) c.angular = integer(g["angular"], "grid.angular", 2);
  }
  if (o.grid) std::tie(c.radial, c.angular) = *o.grid;

  if (j.contains("degree")) c.degree = integer(j["degree"], "degree", 0);
  if (o.degree) {
    if (*o.degree < 0) throw ConfigError("--degree: must be >= 0");
    c.degree = *o.degree;
  }

  if (j.contains("variant")) {
    if (!j["variant"].is_string()) fail("variant", "expected one of \"skoda\", \"a\", \"b\", \"c\"");
    const std::string v = j["variant"].get<std::string>();
    if (v == "skoda") c.variant = Variant::Skoda;
    else if (v == "a") c.variant = Variant::A;
    else if (v == "b") c.variant = Variant::B;
    else if (v == "c") c.variant = Variant::C;
    else fail("variant", "unknown variant '" + v + "'");
  }

  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    require_object(s, "sweep", {"count", "seed", "max_n", "max_p", "max_degree"});
    if (s.contains("count")) c.sweep_count = static_cast<std::size_t>(integer(s["count"], "sweep.count", 1));
    if (s.contains("seed")) {
      if (!s["seed"].is_number_unsigned()) fail("sweep.seed", "expected a non-negative integer");
      c.sweep.seed = s["seed"].get<std::uint64_t>();
    }
    if (s.contains("max_n")) c.sweep.max_n = integer(s["max_n"], "sweep.max_n", 1);
    if (s.contains("max_p")) c.sweep.max_p = integer(s["max_p"], "sweep.max_p", 1);
    if (s.contains("max_degree")) c.sweep.max_degree = integer(s["max_degree"], "sweep.max_degree", 1);
  }
  if (o.seed) c.sweep.seed = *o.seed;

  if (j.contains("iterate")) {
    const json& it = j["iterate"];
    require_object(it, "iterate", {"m0", "N0"});
    if (it.contains("m0")) c.m0 = integer(it["m0"], "iterate.m0", 1);
    if (it.contains("N0")) c.N0 = integer(it["N0"], "iterate.N0", 0);
  }

  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    if (!t.is_object()) fail("tolerances", "expected an object of name -> value");
    for (const auto& [key, value] : t.items()) {
      const double v = number(value, "tolerances." + key);
      if (!(v > 0.0)) fail("tolerances." + key, "must be > 0");
      c.tolerances[key] = v;
    }
  }
  return c;
}

RunConfig parse_config_text(const std::string& text, const Overrides& o) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // byte offset -> line and column
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min<std::size_t>(e.byte ? e.byte - 1 : 0, text.size()); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
  }
  return parse_config(j, o);
}

RunConfig load_config(const std::string& path, const Overrides& o) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), o);
}

ordered_json config_to_json(const RunConfig& c) {
  ordered_json out;
  out["nvars"] = c.nvars;
  ordered_json gens = ordered_json::array();
  for (const auto& g : c.generators) gens.push_back(poly_to_json(g));
  out["generators"] = gens;
  out["f"] = c.f ? poly_to_json(*c.f) : ordered_json(nullptr);
  out["gamma"] = c.gamma;
  out["psi"] = weight_to_json(c.psi);
  out["phi"] = weight_to_json(c.phi);
  ordered_json center = ordered_json::array();
  for (const auto& z : c.domain.center) center.push_back({z.real(), z.imag()});
  out["domain"] = {{"radii", c.domain.radii}, {"center", center}};
  out["grid"] = {{"radial", c.radial}, {"angular", c.angular}};
  out["degree"] = c.degree;
  out["variant"] = variant_name(c.variant);
  out["sweep"] = {{"count", c.sweep_count ? ordered_json(*c.sweep_count) : ordered_json("per-command default")},
                  {"seed", c.sweep.seed},
                  {"max_n", c.sweep.max_n},
                  {"max_p", c.sweep.max_p},
                  {"max_degree", c.sweep.max_degree}};
  out["iterate"] = {{"m0", c.m0}, {"N0", c.N0}};
  return out;
}

}  // namespace skoda
