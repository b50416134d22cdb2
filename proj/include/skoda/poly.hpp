#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "skoda/types.hpp"

namespace skoda {

/// Exponent multi-index (e_1, ..., e_n) of a monomial z_1^{e_1} ... z_n^{e_n}.
using Exponent = std::vector<int>;

/// Sparse polynomial in z in C^n with complex coefficients.
///
/// Exponent arithmetic is exact; coefficients are IEEE complex doubles.
/// Terms whose coefficient becomes exactly zero are erased.
class MultiPoly {
 public:
  using TermMap = std::map<Exponent, cplx>;

  explicit MultiPoly(int nvars = 1);

  static MultiPoly constant(int nvars, cplx c);
  /// The coordinate function z_axis (0-based axis).
  static MultiPoly variable(int nvars, int axis);
  static MultiPoly monomial(int nvars, const Exponent& exps, cplx c = 1.0);

  int nvars() const noexcept { return nvars_; }
  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  /// Total degree; -1 for the zero polynomial.
  int degree() const;
  cplx coeff(const Exponent& exps) const;
  double max_abs_coeff() const;

  /// Accumulates c into the coefficient of z^exps.
  void add_term(const Exponent& exps, cplx c);

  cplx eval(std::span<const cplx> z) const;
  /// d/dz_axis; throws DomainError for an axis outside [0, nvars).
  MultiPoly partial(int axis) const;
  /// Copy with every |coefficient| <= tol removed.
  MultiPoly pruned(double tol) const;

  MultiPoly& operator+=(const MultiPoly& other);
  MultiPoly& operator-=(const MultiPoly& other);
  MultiPoly& operator*=(cplx s);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(MultiPoly a, cplx s) { return a *= s; }
  friend MultiPoly operator*(cplx s, MultiPoly a) { return a *= s; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  MultiPoly operator-() const { return *this * cplx(-1.0); }

 private:
  void require_same_nvars(const MultiPoly& other) const;

  int nvars_;
  TermMap terms_;
};

/// All exponents of total degree <= degree in graded lexicographic order.
std::vector<Exponent> monomials_up_to(int nvars, int degree);

/// Finite sum  sum_i A_i(z) * conj(B_i(z))  of holomorphic times
/// antiholomorphic polynomials. Holomorphic derivatives act on the A factors
/// only and antiholomorphic derivatives on the B factors only, so mixed
/// derivatives are exact.
class BiPoly {
 public:
  using Term = std::pair<MultiPoly, MultiPoly>;

  BiPoly() = default;
  BiPoly(MultiPoly a, MultiPoly b);

  const std::vector<Term>& terms() const noexcept { return terms_; }
  cplx eval(std::span<const cplx> z) const;
  /// d/dz_axis
  BiPoly d_holo(int axis) const;
  /// d/d(conj z_axis)
  BiPoly d_antiholo(int axis) const;

  BiPoly& operator+=(const BiPoly& other);
  friend BiPoly operator+(BiPoly a, const BiPoly& b) { return a += b; }

 private:
  std::vector<Term> terms_;
};

}  // namespace skoda
