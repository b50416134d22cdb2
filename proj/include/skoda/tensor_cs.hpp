#pragma once

#include <cstdint>

#include "skoda/types.hpp"

namespace skoda {

struct CsTolerance {
  double abs = 1e-12;
  double rel = 1e-12;
};

/// Outcome of one Cauchy-Schwarz-type check: lhs <= factor * rhs.
struct CsReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double factor = 0.0;
  double slack = 0.0;  ///< factor * rhs - lhs
  bool holds = true;   ///< slack >= -abs - rel * factor * rhs
};

/// Bilinear tensor inequality for r x n matrices S, T:
///   |sum_{l,k} s_{lk} t_{lk}|^2 <= min(r,n) * sum_{m,l} |sum_k s_{mk} t_{lk}|^2.
/// Throws ShapeError when S and T differ in shape or are empty.
CsReport cs_tensor_check(const CTensor& S, const CTensor& T, CsTolerance tol = {});

/// Sesquilinear form of the same inequality (T's entries conjugated).
CsReport cs_tensor_check_sesquilinear(const CTensor& S, const CTensor& T,
                                      CsTolerance tol = {});

/// Wedge-product inequality for a in C^p and p x n tensors b, c:
///   |sum_{j,l,k} conj(a_j)(a_j b_{lk} - a_l b_{jk}) c_{lk}|^2
///     <= q |a|^2 sum_l sum_{m<j} |sum_k (a_m b_{jk} - a_j b_{mk}) c_{lk}|^2
/// with q = min(n, p-1). Throws DomainError for p < 2.
CsReport cs_wedge_check(const CVector& a, const CTensor& b, const CTensor& c,
                        CsTolerance tol = {});

/// The two sides of the skew-symmetrization identity
///   sum_{j<l,k} B_{jl,k} conj(a_j c_{lk} - a_l c_{jk}) = sum_{j,l,k} B_{jl,k} conj(a_j c_{lk}),
/// where B_{jl,k} = a_j b_{lk} - a_l b_{jk}.
cplx wedge_pairing_skew(const CVector& a, const CTensor& b, const CTensor& c);
cplx wedge_pairing_full(const CVector& a, const CTensor& b, const CTensor& c);

/// Unitary U (p x p) with U a = |a| e_p, built from a Householder reflection
/// followed by a phase fix on the last coordinate. Throws DomainError for a = 0.
CTensor unitary_to_last_axis(const CVector& a);

/// Result of rotating (a, b, c) so that a lies along the last axis.
///
/// With b' = U b and c' = conj(U) c, the wedge quantities collapse onto the
/// (p-1) x n tensors S = -b'_{<p}, T = -c'_{<p}:
///   wedge.lhs = lhs_scale * tensor.lhs
///   wedge.rhs = rhs_scale * (tensor.rhs + rhs_tail)
/// where rhs_tail = sum_m |sum_k S_{mk} c'_{pk}|^2 is the contribution of the
/// component of c along a. It vanishes exactly when sum_l a_l c_{lk} = 0 for
/// every k (c lies in the kernel of contraction with a).
struct WedgeReduction {
  CTensor S;
  CTensor T;
  double lhs_scale = 0.0;  ///< |a|^4
  double rhs_scale = 0.0;  ///< |a|^2
  double rhs_tail = 0.0;
  CTensor unitary;
};

WedgeReduction reduce_wedge_to_tensor(const CVector& a, const CTensor& b, const CTensor& c);

/// Largest observed lhs/rhs over `trials` seeded random r x n instances and
/// the identity pattern (S = T = padded identity), which attains min(r, n).
double tightness_search(int r, int n, int trials, std::uint64_t seed);

}  // namespace skoda
