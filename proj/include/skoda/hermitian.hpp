#pragma once

#include "skoda/types.hpp"

namespace skoda {

/// Eigenvalues below this fraction of the largest eigenvalue count as null
/// for rank, trace-with-respect-to and pseudo-inverse pairings.
inline constexpr double kNullThreshold = 1e-8;

/// A value of an epsilon -> 0+ limit that may be +infinity.
struct ExtendedValue {
  double value = 0.0;
  bool infinite = false;
};

/// k x k complex Hermitian matrix. Entry (a, b) is the coefficient H_{a bbar};
/// the form it defines is v -> sum_{a,b} H_{a bbar} v^a conj(v^b).
class HermitianForm {
 public:
  HermitianForm() = default;
  /// Symmetrizes to (m + m^H) / 2. Throws ShapeError for non-square input.
  explicit HermitianForm(const Eigen::MatrixXcd& m);
  static HermitianForm zero(int dim);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXcd& matrix() const noexcept { return m_; }
  cplx operator()(int a, int b) const { return m_(a, b); }

  /// Ascending eigenvalues.
  Eigen::VectorXd eigenvalues() const;
  double min_eigenvalue() const;
  double max_eigenvalue() const;
  /// Number of eigenvalues above rel_threshold * max(lambda_max, 0).
  int rank(double rel_threshold = kNullThreshold) const;
  /// Largest |entry|.
  double max_abs_entry() const;

  double form(const CVector& v) const;
  /// lim_{eps->0+} of the form of (H + eps I)^{-1} at v. Infinite when v has
  /// a component in the null space of H (relative mass above kNullThreshold).
  ExtendedValue inverse_form(const CVector& v) const;

  HermitianForm& operator+=(const HermitianForm& o);
  HermitianForm& operator-=(const HermitianForm& o);
  HermitianForm& operator*=(double s);
  friend HermitianForm operator+(HermitianForm a, const HermitianForm& b) { return a += b; }
  friend HermitianForm operator-(HermitianForm a, const HermitianForm& b) { return a -= b; }
  friend HermitianForm operator*(double s, HermitianForm a) { return a *= s; }

 private:
  Eigen::MatrixXcd m_;
};

/// Trace of a semipositive form A with respect to a possibly degenerate
/// semipositive form omega: lim_{eps->0+} tr((omega + eps I)^{-1} A).
///
/// Computed as sum over the positive eigenvectors u of omega of
/// u^H A u / lambda. When A has mass on the null space of omega the limit is
/// +infinity and the result is flagged rather than thrown.
ExtendedValue tr_omega(const HermitianForm& A, const HermitianForm& omega);

}  // namespace skoda
