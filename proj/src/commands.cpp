#include "skoda/commands.hpp"

#include <algorithm>
#include <functional>
#include <numbers>

#include "skoda/bundle.hpp"
#include "skoda/errors.hpp"
#include "skoda/hermitian.hpp"

#ifndef SKODA_VERSION
#define SKODA_VERSION "0.0.0"
#endif

namespace skoda {

using nlohmann::ordered_json;

namespace {

constexpr const char* kTool = "skoda_cli";

/// Results and checks of one command before the report envelope is added.
struct Partial {
  ordered_json results = ordered_json::object();
  ordered_json checks = ordered_json::array();
  bool hypothesis_failed = false;
  bool errored = false;
  std::size_t sweep_count = 0;
};

double tolerance(const RunConfig& cfg, const std::string& name) {
  const auto it = cfg.tolerances.find(name);
  return it != cfg.tolerances.end() ? it->second : default_tolerances().at(name);
}

void add_check(Partial& out, const std::string& name, bool pass, ordered_json detail = ordered_json::object()) {
  ordered_json c;
  c["name"] = name;
  c["pass"] = pass;
  for (auto& [k, v] : detail.items()) c[k] = v;
  out.checks.push_back(std::move(c));
}

void add_sweeps(Partial& out, std::vector<SweepResult> sweeps, const RunConfig& cfg) {
  ordered_json arr = ordered_json::array();
  for (auto& s : sweeps) {
    s.retally(tolerance(cfg, s.name));
    ordered_json j;
    j["name"] = s.name;
    j["checks"] = s.checks;
    j["failures"] = s.failures;
    j["errors"] = s.errors;
    j["worst"] = s.worst;
    j["tolerance"] = s.tolerance;
    j["first_failure"] = s.first_failure.empty() ? ordered_json(nullptr) : ordered_json(s.first_failure);
    arr.push_back(j);
    add_check(out, s.name, s.pass(), {{"checks", s.checks}, {"failures", s.failures}});
  }
  out.results["sweeps"] = arr;
}

std::size_t count_or(const RunConfig& cfg, std::size_t fallback) { return cfg.sweep_count.value_or(fallback); }

Partial cmd_cs(const RunConfig& cfg) {
  Partial out;
  out.sweep_count = count_or(cfg, 10000);
  add_sweeps(out, cs_sweep(out.sweep_count, cfg.sweep.seed), cfg);
  return out;
}

Partial cmd_wedge(const RunConfig& cfg) {
  Partial out;
  out.sweep_count = count_or(cfg, 1000);
  add_sweeps(out, wedge_sweep(out.sweep_count, cfg.sweep.seed), cfg);
  return out;
}

SweepSpec spec_for(const RunConfig& cfg, std::size_t fallback) {
  SweepSpec s = cfg.sweep;
  s.count = count_or(cfg, fallback);
  return s;
}

Partial cmd_curvature(const RunConfig& cfg) {
  Partial out;
  const SweepSpec s = spec_for(cfg, 200);
  out.sweep_count = s.count;
  add_sweeps(out, curvature_sweep(s), cfg);
  return out;
}

Partial cmd_dominate(const RunConfig& cfg) {
  Partial out;
  const SweepSpec s = spec_for(cfg, 200);
  out.sweep_count = s.count;
  add_sweeps(out, domination_sweep(s), cfg);

  // normal point of G = (z, 1) at gamma = q: the form vanishes
  const GeneratorSystem G({MultiPoly::variable(1, 0), MultiPoly::constant(1, 1.0)});
  const double lmin = twisted_domination(G, {cplx(0.0)}, G.q()).min_eigenvalue();
  const double tol = tolerance(cfg, "domination_normal_point");
  out.results["normal_point_lambda_min"] = lmin;
  add_check(out, "domination_normal_point", std::abs(lmin) <= tol, {{"lambda_min", lmin}});
  return out;
}

Partial cmd_identity(const RunConfig& cfg) {
  Partial out;
  const SweepSpec s = spec_for(cfg, 1000);
  out.sweep_count = s.count;
  add_sweeps(out, identity54_sweep(s), cfg);
  return out;
}

Partial cmd_variants(const RunConfig& cfg) {
  Partial out;
  const SweepSpec s = spec_for(cfg, 1000);
  out.sweep_count = s.count;
  add_sweeps(out, variants_sweep(s), cfg);
  return out;
}

void require_problem(const RunConfig& cfg, const std::string& command) {
  if (cfg.generators.empty()) throw ConfigError("generators: required by '" + command + "'");
  if (!cfg.f) throw ConfigError("f: required by '" + command + "'");
}

ordered_json integral_json(const Integral& I) {
  return {{"value", I.value},
          {"refined_value", I.refined_value},
          {"diverged", I.diverged},
          {"nodes", I.nodes},
          {"skipped_nodes", I.skipped_nodes},
          {"skipped_mass", I.skipped_mass}};
}

const char* constant_name(Variant v) {
  switch (v) {
    case Variant::Skoda: return "C_hat";
    case Variant::A: return "C_1";
    case Variant::B: return "C_2";
    case Variant::C: return "C_3";
  }
  return "C";
}

Partial cmd_divide(const RunConfig& cfg) {
  require_problem(cfg, "divide");
  Partial out;
  DivisionProblem P{GeneratorSystem(cfg.generators), *cfg.f, cfg.gamma, cfg.psi, cfg.phi, cfg.domain,
                    cfg.radial, cfg.angular, cfg.degree, cfg.variant};
  out.results["q"] = P.G.q();
  out.results["variant"] = variant_name(P.variant);
  try {
    const DivisionSolution s = divide(P);
    ordered_json h = ordered_json::array();
    for (const auto& hj : s.h) h.push_back(poly_to_json(hj));
    out.results["h"] = h;
    out.results["residual_max_coeff"] = s.residual_max_coeff;
    out.results["constant_name"] = constant_name(s.variant);
    out.results["constant"] = s.constant;
    out.results["constant_integral"] = integral_json(s.constant_integral);
    out.results["weighted_norm"] = s.weighted_norm;
    out.results["bound_theorem"] = s.bound_theorem;
    out.results["bound_constructive"] = s.bound_constructive;
    out.results["ratio_to_theorem_bound"] = s.bound_theorem > 0.0 ? ordered_json(s.weighted_norm / s.bound_theorem)
                                                                  : ordered_json(nullptr);
    out.results["meets_theorem"] = s.meets_theorem;
    out.results["meets_constructive"] = s.meets_constructive;
    out.results["syzygies"] = s.syzygies;
    out.results["frozen_syzygies"] = s.frozen_syzygies;
    out.results["finite_directions"] = s.finite_directions;
    out.results["skipped_nodes"] = s.skipped_nodes;

    const double fscale = 1.0 + (cfg.f->is_zero() ? 0.0 : cfg.f->max_abs_coeff());
    add_check(out, "division_residual", s.residual_max_coeff <= tolerance(cfg, "division_residual") * fscale,
              {{"residual", s.residual_max_coeff}});
    add_check(out, "constructive_bound", s.meets_constructive,
              {{"weighted_norm", s.weighted_norm}, {"bound", s.bound_constructive}});
  } catch (const HypothesisFailure& e) {
    out.hypothesis_failed = true;
    out.results["verdict"] = "hypothesis_failed";
    out.results["message"] = e.what();
  }
  return out;
}

ordered_json tree_json(const ExpansionNode& node) {
  ordered_json j;
  j["budget"] = node.budget;
  j["value"] = poly_to_json(node.value);
  if (!node.leaf()) {
    ordered_json kids = ordered_json::array();
    for (const auto& c : node.children) kids.push_back(tree_json(c));
    j["children"] = kids;
  }
  return j;
}

Partial cmd_iterate(const RunConfig& cfg) {
  require_problem(cfg, "iterate");
  Partial out;
  const GeneratorSystem G(cfg.generators);
  const IteratedDivision it = iterated_division(G, *cfg.f, cfg.m0, cfg.N0);
  out.results["m0"] = cfg.m0;
  out.results["N0"] = cfg.N0;
  out.results["depth"] = it.depth;
  out.results["expected_depth"] = it.expected_depth;
  out.results["complete"] = it.complete;
  out.results["diagnostic"] = it.diagnostic.empty() ? ordered_json(nullptr) : ordered_json(it.diagnostic);
  out.results["reexpansion_residual"] = it.reexpansion_residual;
  out.results["tree"] = it.root ? tree_json(*it.root) : ordered_json(nullptr);

  const double fscale = 1.0 + (cfg.f->is_zero() ? 0.0 : cfg.f->max_abs_coeff());
  add_check(out, "iterate_reexpansion", it.reexpansion_residual <= tolerance(cfg, "iterate_reexpansion") * fscale,
            {{"residual", it.reexpansion_residual}});
  add_check(out, "iterate_complete", it.complete);
  add_check(out, "iterate_depth", !it.complete || it.depth == it.expected_depth,
            {{"depth", it.depth}, {"expected", it.expected_depth}});
  return out;
}

using Handler = std::function<Partial(const RunConfig&)>;

const std::vector<std::pair<std::string, Handler>>& handlers() {
  static const std::vector<std::pair<std::string, Handler>> h{
      {"cs-sweep", cmd_cs},           {"wedge-sweep", cmd_wedge},     {"curvature-verify", cmd_curvature},
      {"dominate", cmd_dominate},     {"identity-54", cmd_identity}, {"variants-check", cmd_variants},
      {"divide", cmd_divide},         {"iterate", cmd_iterate}};
  return h;
}

ordered_json fixed_tolerances() {
  return {{"divergence_growth", kDivergenceGrowth},
          {"finite_norm_growth", kFiniteGrowth},
          {"node_floor", kNodeFloor},
          {"freeze_ratio", kFreezeRatio},
          {"rank_threshold", kDivisionRankThreshold},
          {"feasibility", kFeasibleTol},
          {"bound_slack", kMeetsRel},
          {"null_threshold", kNullThreshold}};
}

ordered_json envelope(const std::string& command, const RunConfig* cfg) {
  ordered_json r;
  r["schema_version"] = kReportSchema;
  r["tool"] = {{"name", kTool}, {"version", SKODA_VERSION}};
  r["command"] = command;
  r["config"] = cfg ? config_to_json(*cfg) : ordered_json(nullptr);
  return r;
}

void validate_tolerance_names(const RunConfig& cfg) {
  for (const auto& [name, v] : cfg.tolerances) {
    if (!default_tolerances().count(name)) throw ConfigError("tolerances." + name + ": unknown check name");
  }
}

int exit_for(const Partial& p) {
  if (p.errored) return kExitFail;
  for (const auto& c : p.checks) {
    if (!c["pass"].get<bool>()) return kExitFail;
  }
  return p.hypothesis_failed ? kExitHypothesis : kExitPass;
}

const char* status_for(int code) {
  switch (code) {
    case kExitPass: return "pass";
    case kExitHypothesis: return "hypothesis_failed";
    default: return "fail";
  }
}

Partial run_one(const std::string& command, const Handler& h, const RunConfig& cfg) {
  try {
    return h(cfg);
  } catch (const InfeasibleDivision& e) {
    Partial p;
    p.errored = true;
    p.results["error"] = {{"type", "infeasible_division"}, {"message", e.what()}, {"residual", e.residual()}};
    return p;
  } catch (const std::exception& e) {
    Partial p;
    p.errored = true;
    const char* type = dynamic_cast<const ConfigError*>(&e)          ? "config"
                       : dynamic_cast<const SingularityError*>(&e)   ? "singularity"
                       : dynamic_cast<const PreconditionError*>(&e)  ? "precondition"
                       : dynamic_cast<const ShapeError*>(&e)         ? "shape"
                       : dynamic_cast<const DomainError*>(&e)        ? "domain"
                                                                     : "runtime";
    p.results["error"] = {{"type", type}, {"message", command + ": " + e.what()}};
    return p;
  }
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, h] : handlers()) v.push_back(name);
    v.push_back("all");
    return v;
  }();
  return names;
}

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> t{
      {"tensor_cs_inequality", 1e-12},     {"tensor_cs_identity_tightness", 1e-9},
      {"wedge_reduction_lhs", 1e-12},      {"wedge_reduction_rhs", 1e-12},
      {"wedge_skew_identity", 1e-12},      {"wedge_inequality", 1e-12},
      {"curvature_dual_oracle", 1e-9},     {"curvature_nonpositive", 1e-12},
      {"domination_gamma_q", 1e-8},        {"domination_gamma_q_half", 1e-8},
      {"domination_gamma_q_one", 1e-8},    {"domination_normal_point", 1e-10},
      {"fiber_trace_identity", 1e-10},     {"variant_a_inequality", 1e-10},
      {"variant_c_inequality", 1e-10},     {"division_residual", 1e-10},
      {"iterate_reexpansion", 1e-10}};
  return t;
}

CommandOutcome run_command(const std::string& command, const RunConfig& cfg) {
  CommandOutcome out;
  out.report = envelope(command, &cfg);

  try {
    validate_tolerance_names(cfg);
  } catch (const ConfigError& e) {
    return error_outcome(command, "config", e.what());
  }

  ordered_json tol = ordered_json::object();
  for (const auto& [name, v] : default_tolerances()) tol[name] = tolerance(cfg, name);
  ordered_json prov;
  prov["seed"] = cfg.sweep.seed;
  prov["grid"] = std::to_string(cfg.radial) + "x" + std::to_string(cfg.angular);
  prov["tolerances"] = tol;
  prov["fixed_tolerances"] = fixed_tolerances();

  std::vector<std::pair<std::string, Handler>> selected;
  if (command == "all") {
    for (const auto& [name, h] : handlers()) {
      const bool needs_problem = name == "divide" || name == "iterate";
      if (needs_problem && (cfg.generators.empty() || !cfg.f)) continue;
      selected.emplace_back(name, h);
    }
  } else {
    const auto it = std::find_if(handlers().begin(), handlers().end(), [&](const auto& p) { return p.first == command; });
    if (it == handlers().end()) return error_outcome(command, "usage", "unknown command '" + command + "'");
    selected.push_back(*it);
  }

  ordered_json results = ordered_json::object();
  ordered_json checks = ordered_json::array();
  ordered_json counts = ordered_json::object();
  bool any_error = false, any_fail = false, any_hypothesis = false;
  for (const auto& [name, h] : selected) {
    Partial p = run_one(name, h, cfg);
    const int code = exit_for(p);
    any_error = any_error || p.errored;
    any_fail = any_fail || code == kExitFail;
    any_hypothesis = any_hypothesis || p.hypothesis_failed;
    if (p.sweep_count) counts[name] = p.sweep_count;
    for (auto& c : p.checks) {
      if (command == "all") c["name"] = name + "/" + c["name"].get<std::string>();
      checks.push_back(c);
    }
    if (command == "all") {
      p.results["exit_code"] = code;
      results[name] = p.results;
    } else {
      results = p.results;
    }
  }

  prov["sweep_counts"] = counts;
  out.exit_code = (any_error || any_fail) ? kExitFail : any_hypothesis ? kExitHypothesis : kExitPass;
  out.report["provenance"] = prov;
  out.report["results"] = results;
  out.report["checks"] = checks;
  out.report["status"] = any_error ? "error" : status_for(out.exit_code);
  out.report["exit_code"] = out.exit_code;
  return out;
}

CommandOutcome error_outcome(const std::string& command, const std::string& type, const std::string& message) {
  CommandOutcome out;
  out.exit_code = kExitFail;
  out.report = envelope(command, nullptr);
  out.report["results"] = {{"error", {{"type", type}, {"message", message}}}};
  out.report["checks"] = ordered_json::array();
  out.report["status"] = "error";
  out.report["exit_code"] = kExitFail;
  return out;
}

std::string render_report(const ordered_json& report) { return report.dump(2) + "\n"; }

}  // namespace skoda
