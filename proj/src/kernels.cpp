#include "skoda/kernels.hpp"

#include <cmath>

#include "skoda/errors.hpp"

namespace skoda {

namespace {

struct GramChunk {
  Eigen::MatrixXcd sum;
  Eigen::MatrixXcd comp;
  std::size_t skipped_nodes = 0;
  double skipped_mass = 0.0;

  explicit GramChunk(Eigen::Index k) : sum(Eigen::MatrixXcd::Zero(k, k)), comp(Eigen::MatrixXcd::Zero(k, k)) {}

  static void kahan(double& s, double& c, double x) {
    const double t = s + x;
    c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  }

  void add(const Eigen::MatrixXcd& outer) {
    for (Eigen::Index j = 0; j < outer.cols(); ++j)
      for (Eigen::Index i = 0; i < outer.rows(); ++i) {
        double* s = reinterpret_cast<double*>(&sum(i, j));
        double* c = reinterpret_cast<double*>(&comp(i, j));
        kahan(s[0], c[0], outer(i, j).real());
        kahan(s[1], c[1], outer(i, j).imag());
      }
  }

  Eigen::MatrixXcd value() const { return sum + comp; }
};

void check_tuples(const QuadratureGrid& grid, const std::vector<PolyTuple>& tuples) {
  if (tuples.empty()) return;
  const std::size_t p = tuples.front().size();
  for (const auto& t : tuples) {
    if (t.size() != p) throw ShapeError("weighted_gram: tuples differ in length");
    for (const auto& poly : t) {
      if (poly.nvars() != grid.dim()) throw ShapeError("weighted_gram: polynomial variable count differs from grid");
    }
  }
}

void accumulate_range(const QuadratureGrid& grid, const std::vector<PolyTuple>& tuples, const Density& rho,
                      std::size_t begin, std::size_t end, GramChunk& acc) {
  const Eigen::Index k = static_cast<Eigen::Index>(tuples.size());
  const Eigen::Index p = k == 0 ? 0 : static_cast<Eigen::Index>(tuples.front().size());
  Eigen::MatrixXcd v(k, p);
  for (std::size_t i = begin; i < end; ++i) {
    const Point z = grid.node(i);
    const double r = rho(z);
    if (!std::isfinite(r)) {
      ++acc.skipped_nodes;
      acc.skipped_mass += grid.weights[i];
      continue;
    }
    for (Eigen::Index a = 0; a < k; ++a)
      for (Eigen::Index j = 0; j < p; ++j) v(a, j) = tuples[a][j].eval(z);
    acc.add((grid.weights[i] * r) * (v * v.adjoint()));
  }
}

}  // namespace

WeightedGram weighted_gram(const QuadratureGrid& grid, const std::vector<PolyTuple>& tuples, const Density& rho) {
  check_tuples(grid, tuples);
  const Eigen::Index k = static_cast<Eigen::Index>(tuples.size());
  const std::size_t chunks = (grid.size() + kChunk - 1) / kChunk;
  std::vector<GramChunk> partial(chunks, GramChunk(k));

#pragma omp parallel for schedule(dynamic)
  for (std::size_t c = 0; c < chunks; ++c) {
    accumulate_range(grid, tuples, rho, c * kChunk, std::min(grid.size(), (c + 1) * kChunk), partial[c]);
  }

  GramChunk total(k);
  WeightedGram out;
  for (const auto& part : partial) {
    total.add(part.value());
    out.skipped_nodes += part.skipped_nodes;
    out.skipped_mass += part.skipped_mass;
  }
  out.gram = total.value();
  return out;
}

WeightedGram weighted_gram_serial(const QuadratureGrid& grid, const std::vector<PolyTuple>& tuples,
                                  const Density& rho) {
  check_tuples(grid, tuples);
  GramChunk acc(static_cast<Eigen::Index>(tuples.size()));
  accumulate_range(grid, tuples, rho, 0, grid.size(), acc);
  return {acc.value(), acc.skipped_nodes, acc.skipped_mass};
}

}  // namespace skoda
