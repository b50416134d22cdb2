#include "skoda/tensor_cs.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "skoda/errors.hpp"
#include "skoda/random.hpp"

namespace skoda {

namespace {

CsReport finish(double lhs, double rhs, double factor, CsTolerance tol) {
  CsReport rep;
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.factor = factor;
  rep.slack = factor * rhs - lhs;
  rep.holds = rep.slack >= -tol.abs - tol.rel * factor * rhs;
  return rep;
}

void require_same_shape(const CTensor& S, const CTensor& T, const char* what) {
  if (S.rows() == 0 || S.cols() == 0) {
    throw ShapeError(std::string(what) + ": empty tensor");
  }
  if (S.rows() != T.rows() || S.cols() != T.cols()) {
    throw ShapeError(std::string(what) + ": shape mismatch " + std::to_string(S.rows()) + "x" +
                     std::to_string(S.cols()) + " vs " + std::to_string(T.rows()) + "x" +
                     std::to_string(T.cols()));
  }
}

}  // namespace

CsReport cs_tensor_check(const CTensor& S, const CTensor& T, CsTolerance tol) {
  require_same_shape(S, T, "cs_tensor_check");
  const double factor = static_cast<double>(std::min(S.rows(), S.cols()));
  const double lhs = std::norm(S.cwiseProduct(T).sum());
  // (S T^t)_{m l} = sum_k s_{mk} t_{lk}
  const double rhs = (S * T.transpose()).squaredNorm();
  return finish(lhs, rhs, factor, tol);
}

CsReport cs_tensor_check_sesquilinear(const CTensor& S, const CTensor& T, CsTolerance tol) {
  return cs_tensor_check(S, T.conjugate(), tol);
}

CsReport cs_wedge_check(const CVector& a, const CTensor& b, const CTensor& c, CsTolerance tol) {
  const Eigen::Index p = a.size();
  if (p < 2) throw DomainError("cs_wedge_check: wedge needs p >= 2");
  if (b.rows() != p || c.rows() != p) throw ShapeError("cs_wedge_check: b, c must have p rows");
  require_same_shape(b, c, "cs_wedge_check");
  const Eigen::Index n = b.cols();

  cplx lhs_sum = 0.0;
  for (Eigen::Index j = 0; j < p; ++j) {
    const cplx aj_bar = std::conj(a(j));
    for (Eigen::Index l = 0; l < p; ++l) {
      for (Eigen::Index k = 0; k < n; ++k) {
        lhs_sum += aj_bar * (a(j) * b(l, k) - a(l) * b(j, k)) * c(l, k);
      }
    }
  }

  double rhs = 0.0;
  for (Eigen::Index l = 0; l < p; ++l) {
    for (Eigen::Index j = 1; j < p; ++j) {
      for (Eigen::Index m = 0; m < j; ++m) {
        cplx s = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) s += (a(m) * b(j, k) - a(j) * b(m, k)) * c(l, k);
        rhs += std::norm(s);
      }
    }
  }

  const double q = static_cast<double>(std::min<Eigen::Index>(n, p - 1));
  return finish(std::norm(lhs_sum), rhs, q * a.squaredNorm(), tol);
}

cplx wedge_pairing_skew(const CVector& a, const CTensor& b, const CTensor& c) {
  const Eigen::Index p = a.size();
  cplx sum = 0.0;
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index l = j + 1; l < p; ++l) {
      for (Eigen::Index k = 0; k < b.cols(); ++k) {
        sum += (a(j) * b(l, k) - a(l) * b(j, k)) * std::conj(a(j) * c(l, k) - a(l) * c(j, k));
      }
    }
  }
  return sum;
}

cplx wedge_pairing_full(const CVector& a, const CTensor& b, const CTensor& c) {
  const Eigen::Index p = a.size();
  cplx sum = 0.0;
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index l = 0; l < p; ++l) {
      for (Eigen::Index k = 0; k < b.cols(); ++k) {
        sum += (a(j) * b(l, k) - a(l) * b(j, k)) * std::conj(a(j) * c(l, k));
      }
    }
  }
  return sum;
}

CTensor unitary_to_last_axis(const CVector& a) {
  const double norm = a.norm();
  if (!(norm > 0.0)) throw DomainError("unitary_to_last_axis: a = 0");
  const Eigen::Index p = a.size();
  const CVector x = a / norm;
  const cplx xp = x(p - 1);
  const cplx phase = std::abs(xp) > 0.0 ? xp / std::abs(xp) : cplx(1.0, 0.0);
  const cplx alpha = -phase;  // H x = alpha e_p, chosen to avoid cancellation
  CVector v = x;
  v(p - 1) -= alpha;
  CTensor U = CTensor::Identity(p, p) - (2.0 / v.squaredNorm()) * (v * v.adjoint());
  U.row(p - 1) *= std::conj(alpha);
  return U;
}

WedgeReduction reduce_wedge_to_tensor(const CVector& a, const CTensor& b, const CTensor& c) {
  const Eigen::Index p = a.size();
  if (p < 2) throw DomainError("reduce_wedge_to_tensor: wedge needs p >= 2");
  if (b.rows() != p || c.rows() != p) throw ShapeError("reduce_wedge_to_tensor: b, c must have p rows");
  require_same_shape(b, c, "reduce_wedge_to_tensor");

  WedgeReduction out;
  out.unitary = unitary_to_last_axis(a);
  const CTensor b_rot = out.unitary * b;
  const CTensor c_rot = out.unitary.conjugate() * c;
  out.S = -b_rot.topRows(p - 1);
  out.T = -c_rot.topRows(p - 1);
  const double a2 = a.squaredNorm();
  out.lhs_scale = a2 * a2;
  out.rhs_scale = a2;
  // rows l = p of the wedge rhs: sum_m |sum_k S_{mk} c'_{pk}|^2
  out.rhs_tail = (out.S * c_rot.row(p - 1).transpose()).squaredNorm();
  return out;
}

double tightness_search(int r, int n, int trials, std::uint64_t seed) {
  if (r < 1 || n < 1) throw DomainError("tightness_search: r, n must be >= 1");

  const int m = std::min(r, n);
  CTensor eye = CTensor::Zero(r, n);
  for (int i = 0; i < m; ++i) eye(i, i) = 1.0;
  const CsReport id = cs_tensor_check(eye, eye);
  double best = id.lhs / id.rhs;

#pragma omp parallel for reduction(max : best) schedule(static)
  for (int t = 0; t < trials; ++t) {
    auto rng = instance_rng(seed, static_cast<std::uint64_t>(t));
    const CTensor S = random_ctensor(rng, r, n);
    const CTensor T = random_ctensor(rng, r, n);
    const CsReport rep = cs_tensor_check(S, T);
    if (rep.rhs > 0.0) best = std::max(best, rep.lhs / rep.rhs);
  }
  return best;
}

}  // namespace skoda
