#pragma once

#include <vector>

#include "skoda/generators.hpp"
#include "skoda/hermitian.hpp"
#include "skoda/poly.hpp"
#include "skoda/psh_weight.hpp"

namespace skoda {

/// Curvature components Theta_{j kbar l vbar} of a rank-r bundle over an
/// n-dimensional base. Index pairing (j, l) -> j * n + l flattens it to an
/// (r n) x (r n) Hermitian form.
class NakanoTensor {
 public:
  NakanoTensor(int r, int n);

  int rank() const noexcept { return r_; }
  int base_dim() const noexcept { return n_; }
  cplx& operator()(int j, int k, int l, int v) { return data_[index(j, k, l, v)]; }
  cplx operator()(int j, int k, int l, int v) const { return data_[index(j, k, l, v)]; }

  HermitianForm flatten() const;
  /// sum Theta_{j kbar l vbar} v^{j l} conj(v^{k v}) for an r x n array v.
  double form(const CTensor& v) const;
  /// Largest violation of Theta_{j kbar l vbar} = conj(Theta_{k jbar v lbar}).
  double hermitian_defect() const;

 private:
  std::size_t index(int j, int k, int l, int v) const {
    return ((static_cast<std::size_t>(j) * r_ + k) * n_ + l) * n_ + v;
  }
  int r_;
  int n_;
  std::vector<cplx> data_;
};

/// Holomorphic frame of the kernel of (g_1, ..., g_p) near a point.
///
/// With pivot P (the generator of largest modulus at z) and the remaining
/// indices m_1 < ... < m_{p-1}, row a is the section with g_P in slot m_a and
/// -g_{m_a} in slot P. The induced metric is
///   H_{a bbar} = delta_ab |g_P|^2 + g_{m_a} conj(g_{m_b}).
struct KernelFrame {
  int pivot = 0;
  std::vector<int> members;                    ///< generator index carried by each row
  std::vector<std::vector<MultiPoly>> rows;    ///< (p-1) x p polynomial entries
  CTensor rows_at;                             ///< rows evaluated at z, (p-1) x p
  std::vector<std::vector<BiPoly>> metric;     ///< (p-1) x (p-1)

  int rank() const noexcept { return static_cast<int>(rows.size()); }
  Eigen::MatrixXcd metric_at(const Point& z) const;
};

/// Throws SingularityError at a common zero. A single generator gives the
/// rank-zero frame.
KernelFrame kernel_frame(const GeneratorSystem& G, const Point& z);

/// Ambient components sum_a v_frame(a, l) e_a(z), a p x n array.
CTensor frame_to_ambient(const KernelFrame& frame, const CTensor& v_frame);

/// Kernel-bundle curvature at z.
struct KernelCurvature {
  KernelFrame frame;
  Eigen::MatrixXcd cholesky;  ///< L with H(z) = L L^H; L^{-1} e is orthonormal at z
  NakanoTensor orthonormal;   ///< components in the frame L^{-1} e
};

/// Curvature from exact derivatives of the induced metric: after the constant
/// change of frame making H(z) = I,
///   Theta_{a bbar l vbar} = -d_l dbar_v H_{a bbar} + sum_c d_l H_{a cbar} dbar_v H_{c bbar}.
KernelCurvature kernel_curvature(const GeneratorSystem& G, const Point& z);

/// The same tensor from the second fundamental form: the ambient bundle is
/// flat, so Theta = -(d_l H_{a ubar})(dbar_v H_{u bbar}) with u the unit
/// normal conj(g(z)) / |g(z)| completing the orthonormal frame.
NakanoTensor kernel_curvature_second_fundamental(const GeneratorSystem& G, const Point& z);

/// Nakano form of the kernel bundle at v given by its coordinates in
/// kernel_frame(G, z), computed from the metric-derivative route.
double nakano_form_kernel_frame(const GeneratorSystem& G, const Point& z, const CTensor& v_frame);

/// Closed form
///   -|g|^-6 |sum_{j,l,lambda} conj(g_l)(g_l d_lambda g_j - g_j d_lambda g_l) v^{j lambda}|^2
/// for an ambient p x n array v with sum_j g_j v^{j lambda} = 0. Throws
/// DomainError when that constraint fails by more than 1e-10 (relative).
double nakano_form_kernel_closed(const GeneratorSystem& G, const Point& z, const CTensor& v);

/// Theta(gamma) - (gamma - q) H (x) omega on the kernel fiber (x) T, where
/// Theta(gamma) = Theta + gamma omega (x) H is the curvature of H / |g|^{2 gamma}
/// and omega = d dbar log |g|^2, in a frame orthonormal for H at z.
/// Throws PreconditionError for gamma < q.
HermitianForm twisted_domination(const GeneratorSystem& G, const Point& z, double gamma);

/// Fiber trace FbTr(F)_{l vbar} = w sum_j F[j, v] conj(F[j, l]) of
/// F = dbar_datum(G, f, z) for the twisted flat metric
/// w = e^{-psi} / |g|^{2(q + gamma)}.
HermitianForm fbtr(const GeneratorSystem& G, const MultiPoly& f, const PshWeight& psi, double gamma,
                   const Point& z);

/// Max-entry relative difference between Phi * omega(gamma) and FbTr(F), with
/// Phi = |f|^2 e^{-psi} / (gamma |g|^{2(q+gamma)} |g|^2) and
/// omega(gamma) = gamma d dbar log |g|^2. The denominator is floored at 1e-3
/// of |f|^2 e^{-psi} |dg|^2 / |g|^{2(q+gamma)+2}, the size of the terms that
/// cancel when omega degenerates.
double verify_5_4(const GeneratorSystem& G, const MultiPoly& f, const PshWeight& psi, double gamma,
                  const Point& z);

enum class WeightVariant { A, C };

/// Difference of the two sides of a weight-variant matrix inequality:
///   A: d dbar log(1 + |g|^2) - |g|^2 / (1 + |g|^2) d dbar log |g|^2
///   C: -d dbar log log(1/|g|^2) - d dbar log |g|^2 / log(1/|g|^2)   (needs |g|^2 < 1)
/// The left sides are computed by the chain rule on |g|^2 directly.
HermitianForm variant_inequality_check(const GeneratorSystem& G, const Point& z, WeightVariant which);

struct VariantSides {
  HermitianForm lhs;
  HermitianForm rhs;
};
VariantSides variant_inequality_sides(const GeneratorSystem& G, const Point& z, WeightVariant which);

}  // namespace skoda
