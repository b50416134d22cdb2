#include "skoda/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "skoda/errors.hpp"
#include "skoda/kernels.hpp"

namespace skoda {

double Domain::volume() const {
  double v = 1.0;
  for (double r : radii) v *= std::numbers::pi * r * r;
  return v;
}

void Domain::validate() const {
  if (radii.empty()) throw DomainError("domain: need at least one radius");
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 0.0) || !std::isfinite(radii[k])) {
      throw DomainError("domain: radius " + std::to_string(k) + " must be positive and finite");
    }
  }
  if (center.size() != radii.size()) throw DomainError("domain: center and radii differ in length");
}

Domain Domain::unit_polydisc(int n) { return Domain{std::vector<double>(n, 1.0), Point(n, cplx(0.0))}; }

Rule1D gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: need at least one node");
  Rule1D rule;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.x[i] = -x;
    rule.x[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.w[i] = w;
    rule.w[n - 1 - i] = w;
  }
  return rule;
}

namespace {

void append_panel(Rule1D& out, const Rule1D& gl, double lo, double hi) {
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  for (std::size_t i = 0; i < gl.x.size(); ++i) {
    out.x.push_back(mid + half * gl.x[i]);
    out.w.push_back(half * gl.w[i]);
  }
}

}  // namespace

Rule1D radial_rule(double smax, int count) {
  if (count < 1) throw DomainError("radial_rule: need at least one node");
  Rule1D out;
  if (count < 16) {
    append_panel(out, gauss_legendre(count), 0.0, smax);
    return out;
  }
  const int panels = count / 8;
  const int extra = count - 8 * panels;
  // panel 0 is the outermost; the remainder goes to the outer panels
  for (int i = panels - 1; i >= 0; --i) {
    const double hi = smax * std::ldexp(1.0, -i);
    const double lo = i == panels - 1 ? 0.0 : smax * std::ldexp(1.0, -(i + 1));
    const int nodes = 8 + extra / panels + (i < extra % panels ? 1 : 0);
    append_panel(out, gauss_legendre(nodes), lo, hi);
  }
  return out;
}

Point QuadratureGrid::node(std::size_t i) const {
  const int n = dim();
  return Point(nodes.begin() + static_cast<std::ptrdiff_t>(i * n),
               nodes.begin() + static_cast<std::ptrdiff_t>((i + 1) * n));
}

QuadratureGrid build_grid(const Domain& d, int radial, int angular) {
  d.validate();
  if (radial < 2 || angular < 2) {
    throw DomainError("build_grid: resolution " + std::to_string(radial) + "x" + std::to_string(angular) +
                      " is too small (need at least 2x2)");
  }
  const int n = d.dim();
  const std::size_t per_axis = static_cast<std::size_t>(radial) * angular;

  std::vector<std::vector<cplx>> axis_nodes(n);
  std::vector<std::vector<double>> axis_weights(n);
  for (int k = 0; k < n; ++k) {
    const double R = d.radii[k];
    const Rule1D rule = radial_rule(R * R, radial);
    for (int i = 0; i < radial; ++i) {
      const double r = std::sqrt(rule.x[i]);
      for (int m = 0; m < angular; ++m) {
        const double theta = 2.0 * std::numbers::pi * m / angular;
        axis_nodes[k].push_back(d.center[k] + std::polar(r, theta));
        axis_weights[k].push_back(std::numbers::pi * rule.w[i] / angular);
      }
    }
  }

  QuadratureGrid grid{d, radial, angular, {}, {}};
  std::size_t total = 1;
  for (int k = 0; k < n; ++k) total *= per_axis;
  grid.nodes.resize(total * n);
  grid.weights.resize(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    double w = 1.0;
    for (int k = n - 1; k >= 0; --k) {
      const std::size_t local = rest % per_axis;
      rest /= per_axis;
      grid.nodes[idx * n + k] = axis_nodes[k][local];
      w *= axis_weights[k][local];
    }
    grid.weights[idx] = w;
  }
  return grid;
}

namespace {

struct ChunkSum {
  CompensatedSum sum;
  std::size_t skipped_nodes = 0;
  double skipped_mass = 0.0;
};

void sum_range(const Density& density, const QuadratureGrid& grid, std::size_t begin, std::size_t end,
               ChunkSum& acc) {
  for (std::size_t i = begin; i < end; ++i) {
    const double v = density(grid.node(i));
    if (!std::isfinite(v)) {
      ++acc.skipped_nodes;
      acc.skipped_mass += grid.weights[i];
      continue;
    }
    acc.sum.add(grid.weights[i] * v);
  }
}

Integral with_refinement(const Density& density, const QuadratureGrid& grid,
                         GridSum (*sum)(const Density&, const QuadratureGrid&)) {
  const GridSum base = sum(density, grid);
  const GridSum fine = sum(density, build_grid(grid.domain, 2 * grid.radial, grid.angular));
  Integral out;
  out.value = base.value;
  out.refined_value = fine.value;
  out.diverged = std::abs(fine.value) > 0.0 && std::abs(fine.value) >= kDivergenceGrowth * std::abs(base.value);
  out.nodes = grid.size();
  out.skipped_nodes = base.skipped_nodes;
  out.skipped_mass = base.skipped_mass;
  return out;
}

}  // namespace

GridSum grid_sum(const Density& density, const QuadratureGrid& grid) {
  const std::size_t chunks = (grid.size() + kChunk - 1) / kChunk;
  std::vector<ChunkSum> partial(chunks);

#pragma omp parallel for schedule(dynamic)
  for (std::size_t c = 0; c < chunks; ++c) {
    sum_range(density, grid, c * kChunk, std::min(grid.size(), (c + 1) * kChunk), partial[c]);
  }

  CompensatedSum total;
  GridSum out;
  for (const auto& part : partial) {
    total.add(part.sum.value());
    out.skipped_nodes += part.skipped_nodes;
    out.skipped_mass += part.skipped_mass;
  }
  out.value = total.value();
  return out;
}

GridSum grid_sum_serial(const Density& density, const QuadratureGrid& grid) {
  ChunkSum acc;
  sum_range(density, grid, 0, grid.size(), acc);
  return {acc.sum.value(), acc.skipped_nodes, acc.skipped_mass};
}

Integral integrate(const Density& density, const QuadratureGrid& grid) {
  return with_refinement(density, grid, &grid_sum);
}

Integral integrate_serial(const Density& density, const QuadratureGrid& grid) {
  return with_refinement(density, grid, &grid_sum_serial);
}

}  // namespace skoda
