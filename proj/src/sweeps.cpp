#include "skoda/sweeps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "skoda/bundle.hpp"
#include "skoda/errors.hpp"
#include "skoda/random.hpp"
#include "skoda/tensor_cs.hpp"

namespace skoda {

namespace {

/// Outcome of one instance for one property.
struct Sample {
  double deviation = 0.0;
  std::string detail;
  bool error = false;
};

/// Runs `body(index, out)` for every instance in parallel, each writing one
/// Sample per property, then merges in index order.
template <class Body>
std::vector<SweepResult> run_sweep(std::vector<SweepResult> props, std::size_t count, Body body) {
  const std::size_t k = props.size();
  std::vector<Sample> samples(count * k);
  std::vector<char> counted(count * k, 0);

#pragma omp parallel for schedule(dynamic, 16)
  for (std::size_t i = 0; i < count; ++i) {
    try {
      body(i, &samples[i * k], &counted[i * k]);
    } catch (const std::exception& e) {
      for (std::size_t j = 0; j < k; ++j) {
        samples[i * k + j] = {0.0, std::string("error: ") + e.what(), true};
        counted[i * k + j] = 1;
      }
    }
  }

  for (std::size_t j = 0; j < k; ++j) {
    SweepResult& r = props[j];
    for (std::size_t i = 0; i < count; ++i) {
      if (!counted[i * k + j]) continue;
      Sample& s = samples[i * k + j];
      r.deviations.push_back(s.error ? std::numeric_limits<double>::infinity() : s.deviation);
      r.details.push_back("instance " + std::to_string(i) + ": " + std::move(s.detail));
      if (s.error) ++r.errors;
    }
    r.retally(r.tolerance);
  }
  return props;
}

SweepResult prop(const std::string& name, double tol) {
  SweepResult r;
  r.name = name;
  r.tolerance = tol;
  return r;
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

/// A random point where the generators do not nearly vanish.
Point good_point(std::mt19937_64& rng, const GeneratorSystem& G) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    Point z = random_point(rng, G.n());
    if (gnorm2(G, z).value > 1e-6) return z;
  }
  throw SingularityError("random sweep: could not find a point off the common zero set");
}

}  // namespace

void SweepResult::retally(double tol) {
  tolerance = tol;
  checks = deviations.size();
  failures = 0;
  worst = 0.0;
  first_failure.clear();
  for (std::size_t i = 0; i < deviations.size(); ++i) {
    const double d = deviations[i];
    if (std::isfinite(d)) worst = std::max(worst, d);
    if (!(d <= tol)) {
      if (failures == 0) first_failure = details[i];
      ++failures;
    }
  }
}

GeneratorSystem random_system(std::mt19937_64& rng, int n, int p, int max_degree) {
  std::vector<MultiPoly> g;
  for (int j = 0; j < p; ++j) {
    const int deg = uniform_int(rng, 1, std::max(1, max_degree));
    g.push_back(random_poly(rng, n, deg, uniform_int(rng, 1, 4)));
  }
  if (std::all_of(g.begin(), g.end(), [](const MultiPoly& x) { return x.is_zero(); })) {
    g[0] = MultiPoly::constant(n, 1.0);
  }
  return GeneratorSystem(std::move(g));
}

PshWeight random_psh(std::mt19937_64& rng, int n) {
  std::vector<LogTerm> logs;
  if (uniform(rng, 0.0, 1.0) < 0.5) {
    logs.push_back(LogTerm{uniform(rng, 0.0, 1.0), uniform(rng, 0.1, 1.0), random_poly(rng, n, 2, 2)});
  }
  return PshWeight(n, uniform(rng, -1.0, 1.0), uniform(rng, 0.0, 1.0), std::move(logs));
}

std::vector<SweepResult> cs_sweep(std::size_t count, std::uint64_t seed, int max_r, int max_n) {
  const int shapes = max_r * max_n;
  auto out = run_sweep({prop("tensor_cs_inequality", 1e-12)}, count, [&](std::size_t i, Sample* s, char* c) {
    auto rng = instance_rng(seed, i);
    const int r = 1 + static_cast<int>(i % shapes) / max_n;
    const int n = 1 + static_cast<int>(i % shapes) % max_n;
    const CsReport rep = cs_tensor_check(random_ctensor(rng, r, n), random_ctensor(rng, r, n));
    const double scale = 1.0 + rep.factor * rep.rhs;
    s[0].deviation = std::max(0.0, -rep.slack) / scale;
        s[0].detail = "r=" + std::to_string(r) + " n=" + std::to_string(n) + " slack=" + fmt(rep.slack);
    c[0] = 1;
  });

  SweepResult tight = prop("tensor_cs_identity_tightness", 1e-9);
  for (int r = 1; r <= max_r; ++r)
    for (int n = 1; n <= max_n; ++n) {
      const double best = tightness_search(r, n, 16, seed);
      tight.deviations.push_back(std::abs(best - std::min(r, n)));
      tight.details.push_back("r=" + std::to_string(r) + " n=" + std::to_string(n) + " ratio=" + fmt(best));
    }
  tight.retally(tight.tolerance);
  out.push_back(tight);
  return out;
}

std::vector<SweepResult> wedge_sweep(std::size_t count, std::uint64_t seed, int max_p, int max_n) {
  return run_sweep({prop("wedge_reduction_lhs", 1e-12), prop("wedge_reduction_rhs", 1e-12),
                    prop("wedge_skew_identity", 1e-12), prop("wedge_inequality", 1e-12)},
                   count, [&](std::size_t i, Sample* s, char* c) {
                     auto rng = instance_rng(seed, i);
                     const int p = uniform_int(rng, 2, max_p);
                     const int n = uniform_int(rng, 1, max_n);
                     const CVector a = random_cvector(rng, p);
                     const CTensor b = random_ctensor(rng, p, n);
                     const CTensor cc = random_ctensor(rng, p, n);
                     const std::string shape = "p=" + std::to_string(p) + " n=" + std::to_string(n);

                     const CsReport direct = cs_wedge_check(a, b, cc);
                     const WedgeReduction red = reduce_wedge_to_tensor(a, b, cc);
                     const CsReport reduced = cs_tensor_check(red.S, red.T);
                     const double dl = rel_diff(direct.lhs, red.lhs_scale * reduced.lhs);
                     const double dr = rel_diff(direct.rhs, red.rhs_scale * (reduced.rhs + red.rhs_tail));
                     s[0] = {dl, shape + " rel=" + fmt(dl)};
                     s[1] = {dr, shape + " rel=" + fmt(dr)};

                     const cplx skew = wedge_pairing_skew(a, b, cc);
                     const cplx full = wedge_pairing_full(a, b, cc);
                     const double ds = std::abs(skew - full) / std::max({std::abs(skew), std::abs(full), 1e-300});
                     s[2] = {ds, shape + " rel=" + fmt(ds)};

                     const double scale = 1.0 + direct.factor * direct.rhs;
                     s[3] = {std::max(0.0, -direct.slack) / scale, shape + " slack=" + fmt(direct.slack)};
                     for (int k = 0; k < 4; ++k) c[k] = 1;
                   });
}

std::vector<SweepResult> curvature_sweep(const SweepSpec& spec) {
  return run_sweep({prop("curvature_dual_oracle", 1e-9), prop("curvature_nonpositive", 1e-12)}, spec.count,
                   [&](std::size_t i, Sample* s, char* c) {
                     auto rng = instance_rng(spec.seed, i);
                     const int n = uniform_int(rng, 1, spec.max_n);
                     const int p = uniform_int(rng, 2, std::max(2, spec.max_p));
                     const GeneratorSystem G = random_system(rng, n, p, spec.max_degree);
                     const Point z = good_point(rng, G);
                     const CTensor v_frame = random_ctensor(rng, p - 1, n);

                     const double framed = nakano_form_kernel_frame(G, z, v_frame);
                     const CTensor v = frame_to_ambient(kernel_frame(G, z), v_frame);
                     const double closed = nakano_form_kernel_closed(G, z, v);

                     // absolute floor at the scale of the individual terms
                     const GeneratorJet jet = evaluate(G, z);
                     const double terms = v.squaredNorm() * jet.grad.squaredNorm() / jet.norm2;
                     const double diff = std::abs(framed - closed);
                     const double scale = std::max({std::abs(framed), std::abs(closed)}) + 1e-5 * terms;
                     s[0] = {scale > 0.0 ? diff / scale : 0.0, "frame=" + fmt(framed) + " closed=" + fmt(closed)};
                     const double top = std::max(framed, closed);
                     s[1] = {std::max(0.0, top), "value=" + fmt(top)};
                     c[0] = c[1] = 1;
                   });
}

std::vector<SweepResult> domination_sweep(const SweepSpec& spec) {
  return run_sweep({prop("domination_gamma_q", 1e-8), prop("domination_gamma_q_half", 1e-8),
                    prop("domination_gamma_q_one", 1e-8)},
                   spec.count, [&](std::size_t i, Sample* s, char* c) {
                     auto rng = instance_rng(spec.seed, i);
                     const int n = uniform_int(rng, 1, spec.max_n);
                     const int p = uniform_int(rng, 2, std::max(2, spec.max_p));
                     const GeneratorSystem G = random_system(rng, n, p, spec.max_degree);
                     const Point z = good_point(rng, G);
                     const double offsets[3] = {0.0, 0.5, 1.0};
                     for (int k = 0; k < 3; ++k) {
                       const HermitianForm M = twisted_domination(G, z, G.q() + offsets[k]);
                       const double scale = 1.0 + M.max_abs_entry();
                       const double lmin = M.min_eigenvalue();
                       s[k] = {std::max(0.0, -lmin) / scale, "lambda_min=" + fmt(lmin)};
                       c[k] = 1;
                     }
                   });
}

std::vector<SweepResult> identity54_sweep(const SweepSpec& spec) {
  return run_sweep({prop("fiber_trace_identity", 1e-10)}, spec.count, [&](std::size_t i, Sample* s, char* c) {
    auto rng = instance_rng(spec.seed, i);
    const int n = uniform_int(rng, 1, spec.max_n);
    const int p = uniform_int(rng, 2, std::max(2, spec.max_p));
    const GeneratorSystem G = random_system(rng, n, p, spec.max_degree);
    const MultiPoly f = random_poly(rng, n, spec.max_degree, uniform_int(rng, 1, 4));
    const PshWeight psi = random_psh(rng, n);
    const double gamma = uniform(rng, 0.1, 3.0);
    const Point z = good_point(rng, G);
    const double res = verify_5_4(G, f, psi, gamma, z);
    s[0] = {res, "residual=" + fmt(res)};
    c[0] = 1;
  });
}

std::vector<SweepResult> variants_sweep(const SweepSpec& spec) {
  return run_sweep({prop("variant_a_inequality", 1e-10), prop("variant_c_inequality", 1e-10)}, spec.count,
                   [&](std::size_t i, Sample* s, char* c) {
                     auto rng = instance_rng(spec.seed, i);
                     const int n = uniform_int(rng, 1, spec.max_n);
                     const int p = uniform_int(rng, 1, std::max(1, spec.max_p));
                     const GeneratorSystem G = random_system(rng, n, p, spec.max_degree);
                     const Point z = good_point(rng, G);

                     auto record = [&](int k, const VariantSides& sides) {
                       const HermitianForm d = sides.lhs - sides.rhs;
                       const double scale = 1.0 + std::max(sides.lhs.max_abs_entry(), sides.rhs.max_abs_entry());
                       const double lmin = d.min_eigenvalue();
                       s[k] = {std::max(0.0, -lmin) / scale, "lambda_min=" + fmt(lmin)};
                       c[k] = 1;
                     };
                     record(0, variant_inequality_sides(G, z, WeightVariant::A));

                     // shrink g so that |g(z)|^2 lands in (0, 0.9]
                     const double t = uniform(rng, 0.05, 0.95) / std::sqrt(gnorm2(G, z).value);
                     const GeneratorSystem small = G.transformed(t * CTensor::Identity(p, p));
                     record(1, variant_inequality_sides(small, z, WeightVariant::C));
                   });
}

}  // namespace skoda
