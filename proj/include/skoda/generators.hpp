#pragma once

#include <vector>

#include "skoda/hermitian.hpp"
#include "skoda/poly.hpp"
#include "skoda/types.hpp"

namespace skoda {

/// The tuple (g_1, ..., g_p) of polynomials in n variables, not all zero.
class GeneratorSystem {
 public:
  /// Throws DomainError for an empty list or all-zero generators and
  /// ShapeError when the generators disagree on the variable count.
  explicit GeneratorSystem(std::vector<MultiPoly> g);

  int n() const noexcept { return n_; }
  int p() const noexcept { return static_cast<int>(g_.size()); }
  /// q = min(n, p - 1); zero for a single generator.
  int q() const noexcept { return std::min(n(), p() - 1); }

  const std::vector<MultiPoly>& polys() const noexcept { return g_; }
  const MultiPoly& operator[](int j) const { return g_.at(j); }
  /// d g_j / d z_lambda, cached at construction.
  const MultiPoly& partial(int j, int lambda) const { return dg_.at(j).at(lambda); }

  /// (U g)_i = sum_j U_{ij} g_j for a constant p x p matrix U.
  GeneratorSystem transformed(const CTensor& U) const;

 private:
  int n_;
  std::vector<MultiPoly> g_;
  std::vector<std::vector<MultiPoly>> dg_;
};

/// Values and first derivatives of the generators at one point.
struct GeneratorJet {
  CVector g;     ///< g_j(z)
  CTensor grad;  ///< grad(j, lambda) = d_lambda g_j(z), p x n
  double norm2;  ///< |g|^2
};

GeneratorJet evaluate(const GeneratorSystem& G, const Point& z);

struct Gnorm2 {
  double value = 0.0;
  bool common_zero = false;  ///< all generators vanish at z
};

Gnorm2 gnorm2(const GeneratorSystem& G, const Point& z);
CTensor grad_matrix(const GeneratorSystem& G, const Point& z);

/// omega = d dbar log |g|^2 by the quotient rule:
///   (sum_j d_l g_j conj(d_v g_j)) / |g|^2
///     - (sum_j d_l g_j conj g_j)(sum_k g_k conj(d_v g_k)) / |g|^4.
/// Throws SingularityError at a common zero.
HermitianForm log_hessian(const GeneratorSystem& G, const Point& z);
HermitianForm log_hessian(const GeneratorJet& jet);

/// The same form from pairwise minors:
///   |g|^-4 sum_{j<k} (d_l g_j g_k - d_l g_k g_j) conj(d_v g_j g_k - d_v g_k g_j).
HermitianForm log_hessian_wedge(const GeneratorSystem& G, const Point& z);
HermitianForm log_hessian_wedge(const GeneratorJet& jet);

/// F[j, v] = f(z) * dbar_v(conj(g_j) / |g|^2), a p x n array whose columns
/// are annihilated by contraction with g. Throws SingularityError at a common zero.
CTensor dbar_datum(const GeneratorSystem& G, const MultiPoly& f, const Point& z);
CTensor dbar_datum(const GeneratorJet& jet, cplx f_value);

}  // namespace skoda
