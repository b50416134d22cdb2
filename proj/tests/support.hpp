#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "skoda/division.hpp"
#include "skoda/random.hpp"
#include "skoda/sweeps.hpp"

namespace skoda::testing {

/// Random problem with f in the ideal at degree 1 and |g|^2 >= 0.05 on both
/// quadrature grids, so every weight in play is bounded.
inline DivisionProblem random_feasible_problem(std::uint64_t seed, std::uint64_t index) {
  auto rng = instance_rng(seed, index);
  std::uniform_int_distribution<int> pick_n(1, 2), pick_p(1, 3);
  std::uniform_real_distribution<double> pick_gamma(0.5, 2.0);
  for (;;) {
    const int n = pick_n(rng);
    const int p = pick_p(rng);
    std::vector<MultiPoly> g;
    g.push_back(MultiPoly::constant(n, 1.0 + 0.5 * std::abs(random_cplx(rng))) + 0.3 * random_poly(rng, n, 2, 3));
    for (int j = 1; j < p; ++j) g.push_back(random_poly(rng, n, 2, 3));
    GeneratorSystem G(std::move(g));

    MultiPoly f(n);
    for (int j = 0; j < p; ++j) f += random_poly(rng, n, 1, 2) * G[j];
    if (f.is_zero()) continue;

    DivisionProblem P{G, f};
    P.gamma = pick_gamma(rng);
    P.psi = random_psh(rng, n);
    P.domain = Domain::unit_polydisc(n);
    P.radial = n == 1 ? 32 : 8;
    P.angular = n == 1 ? 16 : 6;
    P.degree = 1;

    bool ok = true;
    for (int radial : {P.radial, 2 * P.radial}) {
      const QuadratureGrid grid = build_grid(P.domain, radial, P.angular);
      for (std::size_t i = 0; i < grid.size() && ok; ++i) ok = gnorm2(G, grid.node(i)).value >= 0.05;
    }
    if (ok) return P;
  }
}

/// Weighted inner product <a, b> on the grid, evaluated independently of the
/// library's Gram kernel.
inline cplx weighted_inner(const DivisionProblem& P, const QuadratureGrid& grid, const PolyTuple& a,
                           const PolyTuple& b) {
  cplx sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point z = grid.node(i);
    const double s = gnorm2(P.G, z).value;
    const double w = std::exp(-P.psi.value(z)) / std::pow(s, P.G.q() + P.gamma);
    cplx dot = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) dot += a[j].eval(z) * std::conj(b[j].eval(z));
    sum += grid.weights[i] * w * dot;
  }
  return sum;
}

inline double weighted_norm2(const DivisionProblem& P, const QuadratureGrid& grid, const PolyTuple& h) {
  return weighted_inner(P, grid, h, h).real();
}

inline PolyTuple axpy(const PolyTuple& h, cplx c, const PolyTuple& s) {
  PolyTuple out = h;
  for (std::size_t j = 0; j < h.size(); ++j) out[j] += c * s[j];
  return out;
}

struct DivisionProperties {
  double residual = 0.0;         ///< / (1 + max |coeff f|)
  double gradient = 0.0;         ///< max_k |<h, s_k>| / (|h| |s_k|)
  double particular_gap = 0.0;   ///< (norm(h) - norm(particular)) / norm(particular), want <= 0
  double perturbation_gap = 0.0; ///< max over perturbations of (norm(h) - norm(h + e s)) / norm(h)
  double monotone_gap = 0.0;     ///< norm(d = 2) - norm(d = 1)
  double pointwise_gap = 0.0;    ///< max_i (|f|^2/|g|^2 - sum |h_j|^2) / scale
  std::string error;

  bool pass() const {
    return error.empty() && residual <= 1e-10 && gradient <= 1e-8 && particular_gap <= 1e-10 &&
           perturbation_gap <= 1e-10 && monotone_gap <= 1e-10 && pointwise_gap <= 1e-9;
  }

  std::string describe() const {
    std::ostringstream os;
    os.precision(3);
    if (!error.empty()) return "error: " + error;
    os << "residual=" << residual << " gradient=" << gradient << " particular_gap=" << particular_gap
       << " perturbation_gap=" << perturbation_gap << " monotone_gap=" << monotone_gap
       << " pointwise_gap=" << pointwise_gap;
    return os.str();
  }
};

inline DivisionProperties division_properties(const DivisionProblem& base, std::uint64_t seed) {
  DivisionProperties out;
  try {
    const QuadratureGrid grid = build_grid(base.domain, base.radial, base.angular);
    const double fscale = 1.0 + base.f.max_abs_coeff();
    double norm_prev = 0.0;
    for (int d : {1, 2}) {
      DivisionProblem P = base;
      P.degree = d;
      const DivisionSolution sol = divide(P);
      out.residual = std::max(out.residual, division_residual(P.G, P.f, sol.h) / fscale);

      const double hn = weighted_norm2(P, grid, sol.h);
      const std::vector<PolyTuple> syz = syzygy_basis(P.G, d);
      auto rng = instance_rng(seed, static_cast<std::uint64_t>(d));
      for (const auto& s : syz) {
        const double sn = weighted_norm2(P, grid, s);
        if (!(sn > 0.0)) continue;
        out.gradient = std::max(out.gradient, std::abs(weighted_inner(P, grid, sol.h, s)) / std::sqrt(hn * sn));
      }
      for (int k = 0; k < 20 && !syz.empty(); ++k) {
        PolyTuple pert = sol.h;
        for (const auto& s : syz) {
          const double sn = weighted_norm2(P, grid, s);
          if (sn > 0.0) pert = axpy(pert, 0.1 * random_cplx(rng) * std::sqrt(hn / sn), s);
        }
        out.perturbation_gap = std::max(out.perturbation_gap, (hn - weighted_norm2(P, grid, pert)) / hn);
      }
      const ParticularResult part = particular_solution(P.G, P.f, d);
      const double pn = weighted_norm2(P, grid, part.h);
      out.particular_gap = std::max(out.particular_gap, (hn - pn) / pn);

      double pw_scale = 0.0;
      std::vector<double> gaps(grid.size());
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const Point z = grid.node(i);
        const double least = std::norm(P.f.eval(z)) / gnorm2(P.G, z).value;
        double h2 = 0.0;
        for (const auto& hj : sol.h) h2 += std::norm(hj.eval(z));
        pw_scale = std::max(pw_scale, least);
        gaps[i] = least - h2;
      }
      const double worst = *std::max_element(gaps.begin(), gaps.end());
      out.pointwise_gap = std::max(out.pointwise_gap, worst / std::max(pw_scale, 1e-300));

      if (d == 2) out.monotone_gap = sol.weighted_norm - norm_prev;
      norm_prev = sol.weighted_norm;
    }
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace skoda::testing
