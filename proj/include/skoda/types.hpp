#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace skoda {

using cplx = std::complex<double>;

/// Dense complex r x n array. Houses the tensors S, T of the tensor
/// Cauchy-Schwarz inequality, p x n gradient matrices and p x n tangent
/// vectors v^{j lambda}.
using CTensor = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// A point in C^n.
using Point = std::vector<cplx>;

/// True when every entry is a finite complex number.
inline bool all_finite(const CTensor& t) {
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    const cplx v = t.data()[i];
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

}  // namespace skoda
