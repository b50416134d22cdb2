#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "skoda/types.hpp"

namespace skoda {

/// Polydisc prod_k {|z_k - center_k| < radii_k}.
struct Domain {
  std::vector<double> radii;
  Point center;

  int dim() const noexcept { return static_cast<int>(radii.size()); }
  double volume() const;
  /// Throws DomainError for non-positive radii or a center of the wrong size.
  void validate() const;

  static Domain unit_polydisc(int n);
};

/// Nodes and weights of a 1-D rule.
struct Rule1D {
  std::vector<double> x;
  std::vector<double> w;
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton on the Legendre recurrence).
Rule1D gauss_legendre(int n);

/// Rule with exactly `count` nodes for ds on (0, smax].
///
/// Below 16 nodes this is plain Gauss-Legendre. Otherwise (0, smax] is split
/// into count/8 dyadic panels [smax 2^-(i+1), smax 2^-i] (the innermost one
/// reaching 0) carrying 8 nodes each, with the remainder handed to the outer
/// panels. Doubling `count` doubles the depth of the grading, so an integrand
/// that blows up like 1/s at the centre gains a fixed amount per refinement
/// instead of converging.
Rule1D radial_rule(double smax, int count);

/// Tensor-product rule over a polydisc: per complex variable, the radial rule
/// in s = |z - c|^2 times `angular` equally spaced angles.
struct QuadratureGrid {
  Domain domain;
  int radial = 0;
  int angular = 0;
  std::vector<cplx> nodes;     ///< size() x n, row-major
  std::vector<double> weights;

  int dim() const noexcept { return domain.dim(); }
  std::size_t size() const noexcept { return weights.size(); }
  Point node(std::size_t i) const;
};

/// Throws DomainError when radial or angular is below 2 or the domain is invalid.
QuadratureGrid build_grid(const Domain& d, int radial, int angular);

/// A real density sampled at grid nodes. Non-finite values mark singular
/// nodes, which are skipped and reported.
using Density = std::function<double(const Point&)>;

struct Integral {
  double value = 0.0;
  double refined_value = 0.0;  ///< same density on the grid with doubled radial count
  bool diverged = false;       ///< |refined| >= kDivergenceGrowth * |value|
  std::size_t nodes = 0;
  std::size_t skipped_nodes = 0;
  double skipped_mass = 0.0;   ///< total weight of skipped nodes
};

inline constexpr double kDivergenceGrowth = 1.5;

/// Compensated sum of weight * density over the grid.
struct GridSum {
  double value = 0.0;
  std::size_t skipped_nodes = 0;
  double skipped_mass = 0.0;
};

/// OpenMP version: fixed-size chunks summed independently and combined in
/// chunk order, so the result does not depend on the thread count.
GridSum grid_sum(const Density& density, const QuadratureGrid& grid);
/// Single pass in node order; reference for grid_sum.
GridSum grid_sum_serial(const Density& density, const QuadratureGrid& grid);

/// Sum on `grid` plus the refinement check against a grid with twice the
/// radial nodes.
Integral integrate(const Density& density, const QuadratureGrid& grid);
Integral integrate_serial(const Density& density, const QuadratureGrid& grid);

}  // namespace skoda
