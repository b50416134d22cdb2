#pragma once

#include <vector>

#include "skoda/hermitian.hpp"
#include "skoda/poly.hpp"

namespace skoda {

/// One term kappa * log(eps + |p(z)|^2) of a weight expression.
struct LogTerm {
  double kappa = 0.0;
  double eps = 1.0;
  MultiPoly poly{1};
};

/// Plurisubharmonic weight
///   psi(z) = c0 + c1 |z|^2 + sum_i kappa_i log(eps_i + |p_i(z)|^2)
/// with c1, kappa_i >= 0 and eps_i > 0, so every term has a semipositive
/// complex Hessian.
class PshWeight {
 public:
  PshWeight() = default;
  /// Throws DomainError when a coefficient violates the sign constraints or a
  /// polynomial has the wrong number of variables.
  PshWeight(int nvars, double c0, double c1, std::vector<LogTerm> logs = {});

  static PshWeight zero(int nvars) { return PshWeight(nvars, 0.0, 0.0); }

  int nvars() const noexcept { return nvars_; }
  double c0() const noexcept { return c0_; }
  double c1() const noexcept { return c1_; }
  const std::vector<LogTerm>& logs() const noexcept { return logs_; }
  bool is_zero() const noexcept { return c0_ == 0.0 && c1_ == 0.0 && logs_.empty(); }

  double value(const Point& z) const;
  /// Complex Hessian d_l dbar_v psi as an n x n Hermitian form.
  HermitianForm hessian(const Point& z) const;

 private:
  int nvars_ = 1;
  double c0_ = 0.0;
  double c1_ = 0.0;
  std::vector<LogTerm> logs_;
  std::vector<std::vector<MultiPoly>> dlogs_;
};

}  // namespace skoda
