#include "skoda/hermitian.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "skoda/errors.hpp"

namespace skoda {

HermitianForm::HermitianForm(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw ShapeError("HermitianForm: matrix must be square");
  m_ = 0.5 * (m + m.adjoint());
}

HermitianForm HermitianForm::zero(int dim) { return HermitianForm(Eigen::MatrixXcd::Zero(dim, dim)); }

Eigen::VectorXd HermitianForm::eigenvalues() const {
  if (m_.size() == 0) return Eigen::VectorXd();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double HermitianForm::min_eigenvalue() const {
  const auto ev = eigenvalues();
  return ev.size() ? ev(0) : 0.0;
}

double HermitianForm::max_eigenvalue() const {
  const auto ev = eigenvalues();
  return ev.size() ? ev(ev.size() - 1) : 0.0;
}

int HermitianForm::rank(double rel_threshold) const {
  const auto ev = eigenvalues();
  if (ev.size() == 0) return 0;
  const double top = std::max(ev(ev.size() - 1), 0.0);
  if (top == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) r += ev(i) > rel_threshold * top ? 1 : 0;
  return r;
}

double HermitianForm::max_abs_entry() const { return m_.size() ? m_.cwiseAbs().maxCoeff() : 0.0; }

double HermitianForm::form(const CVector& v) const {
  if (v.size() != m_.rows()) throw ShapeError("HermitianForm::form: dimension mismatch");
  // sum_{a,b} H_{ab} v_a conj(v_b) = w^H H w with w = conj(v)
  const CVector w = v.conjugate();
  return (w.adjoint() * m_ * w)(0, 0).real();
}

ExtendedValue HermitianForm::inverse_form(const CVector& v) const {
  if (v.size() != m_.rows()) throw ShapeError("HermitianForm::inverse_form: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_);
  const auto& ev = es.eigenvalues();
  const double top = std::max(ev.size() ? ev(ev.size() - 1) : 0.0, 0.0);
  const CVector w = v.conjugate();
  const double total = w.squaredNorm();
  double value = 0.0;
  double null_mass = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const double c = std::norm(es.eigenvectors().col(i).dot(w));
    if (top > 0.0 && ev(i) > kNullThreshold * top) {
      value += c / ev(i);
    } else {
      null_mass += c;
    }
  }
  if (null_mass > kNullThreshold * total) return {0.0, true};
  return {value, false};
}

HermitianForm& HermitianForm::operator+=(const HermitianForm& o) {
  if (o.dim() != dim()) throw ShapeError("HermitianForm: dimension mismatch");
  m_ += o.m_;
  return *this;
}

HermitianForm& HermitianForm::operator-=(const HermitianForm& o) {
  if (o.dim() != dim()) throw ShapeError("HermitianForm: dimension mismatch");
  m_ -= o.m_;
  return *this;
}

HermitianForm& HermitianForm::operator*=(double s) {
  m_ *= s;
  return *this;
}

ExtendedValue tr_omega(const HermitianForm& A, const HermitianForm& omega) {
  if (A.dim() != omega.dim()) throw ShapeError("tr_omega: dimension mismatch");
  if (A.dim() == 0) return {0.0, false};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(omega.matrix());
  const auto& ev = es.eigenvalues();
  const double top = std::max(ev(ev.size() - 1), 0.0);
  const double scale = A.matrix().norm();
  double value = 0.0;
  double null_mass = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const auto u = es.eigenvectors().col(i);
    const double a = (u.adjoint() * A.matrix() * u)(0, 0).real();
    if (top > 0.0 && ev(i) > kNullThreshold * top) {
      value += a / ev(i);
    } else {
      null_mass += std::abs(a);
    }
  }
  if (null_mass > kNullThreshold * scale) return {0.0, true};
  return {value, false};
}

}  // namespace skoda
