#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "skoda/poly.hpp"
#include "skoda/quadrature.hpp"

namespace skoda {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Nodes per work unit in the parallel reductions. Fixed, so the summation
/// tree is the same for every thread count.
inline constexpr std::size_t kChunk = 1024;

/// Weighted Gram matrix of K polynomial p-tuples over a grid:
///   G_ab = sum_i w_i rho(z_i) sum_j t_aj(z_i) conj(t_bj(z_i)).
/// Nodes where rho is not finite are skipped and reported.
struct WeightedGram {
  Eigen::MatrixXcd gram;
  std::size_t skipped_nodes = 0;
  double skipped_mass = 0.0;
};

using PolyTuple = std::vector<MultiPoly>;

WeightedGram weighted_gram(const QuadratureGrid& grid, const std::vector<PolyTuple>& tuples, const Density& rho);
WeightedGram weighted_gram_serial(const QuadratureGrid& grid, const std::vector<PolyTuple>& tuples,
                                  const Density& rho);

}  // namespace skoda
