#include "skoda/bundle.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>

#include "skoda/errors.hpp"

namespace skoda {

NakanoTensor::NakanoTensor(int r, int n)
    : r_(r), n_(n), data_(static_cast<std::size_t>(r) * r * n * n, cplx(0.0)) {}

HermitianForm NakanoTensor::flatten() const {
  const int d = r_ * n_;
  Eigen::MatrixXcd m(d, d);
  for (int j = 0; j < r_; ++j)
    for (int k = 0; k < r_; ++k)
      for (int l = 0; l < n_; ++l)
        for (int v = 0; v < n_; ++v) m(j * n_ + l, k * n_ + v) = (*this)(j, k, l, v);
  return HermitianForm(m);
}

double NakanoTensor::form(const CTensor& v) const {
  if (v.rows() != r_ || v.cols() != n_) throw ShapeError("NakanoTensor::form: v must be r x n");
  cplx s = 0.0;
  for (int j = 0; j < r_; ++j)
    for (int k = 0; k < r_; ++k)
      for (int l = 0; l < n_; ++l)
        for (int w = 0; w < n_; ++w) s += (*this)(j, k, l, w) * v(j, l) * std::conj(v(k, w));
  return s.real();
}

double NakanoTensor::hermitian_defect() const {
  double worst = 0.0;
  for (int j = 0; j < r_; ++j)
    for (int k = 0; k < r_; ++k)
      for (int l = 0; l < n_; ++l)
        for (int v = 0; v < n_; ++v)
          worst = std::max(worst, std::abs((*this)(j, k, l, v) - std::conj((*this)(k, j, v, l))));
  return worst;
}

Eigen::MatrixXcd KernelFrame::metric_at(const Point& z) const {
  const int r = rank();
  Eigen::MatrixXcd h(r, r);
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) h(a, b) = metric[a][b].eval(z);
  return h;
}

KernelFrame kernel_frame(const GeneratorSystem& G, const Point& z) {
  const GeneratorJet jet = evaluate(G, z);
  if (!(jet.norm2 > 0.0)) throw SingularityError("kernel_frame: all generators vanish at the point");
  const int p = G.p();
  const int n = G.n();

  KernelFrame frame;
  jet.g.cwiseAbs().maxCoeff(&frame.pivot);
  for (int j = 0; j < p; ++j) {
    if (j != frame.pivot) frame.members.push_back(j);
  }
  const int r = p - 1;
  const MultiPoly& gp = G[frame.pivot];
  frame.rows.assign(r, std::vector<MultiPoly>(p, MultiPoly(n)));
  frame.rows_at = CTensor::Zero(r, p);
  frame.metric.assign(r, std::vector<BiPoly>(r));
  for (int a = 0; a < r; ++a) {
    const int m = frame.members[a];
    frame.rows[a][m] = gp;
    frame.rows[a][frame.pivot] = -G[m];
    frame.rows_at(a, m) = jet.g(frame.pivot);
    frame.rows_at(a, frame.pivot) = -jet.g(m);
    for (int b = 0; b < r; ++b) {
      BiPoly h(G[m], G[frame.members[b]]);
      if (a == b) h += BiPoly(gp, gp);
      frame.metric[a][b] = std::move(h);
    }
  }
  return frame;
}

CTensor frame_to_ambient(const KernelFrame& frame, const CTensor& v_frame) {
  if (v_frame.rows() != frame.rank()) throw ShapeError("frame_to_ambient: v_frame must have p-1 rows");
  return frame.rows_at.transpose() * v_frame;
}

namespace {

Eigen::MatrixXcd eval_bipoly_matrix(const std::vector<std::vector<BiPoly>>& m, const Point& z) {
  const int r = static_cast<int>(m.size());
  Eigen::MatrixXcd out(r, r);
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) out(a, b) = m[a][b].eval(z);
  return out;
}

template <class Op>
std::vector<std::vector<BiPoly>> map_bipoly(const std::vector<std::vector<BiPoly>>& m, Op op) {
  std::vector<std::vector<BiPoly>> out = m;
  for (auto& row : out)
    for (auto& e : row) e = op(e);
  return out;
}

}  // namespace

KernelCurvature kernel_curvature(const GeneratorSystem& G, const Point& z) {
  KernelCurvature out{kernel_frame(G, z), {}, NakanoTensor(G.p() - 1, G.n())};
  const int r = out.frame.rank();
  const int n = G.n();
  if (r == 0) return out;

  const Eigen::MatrixXcd h = out.frame.metric_at(z);
  Eigen::LLT<Eigen::MatrixXcd> llt(h);
  out.cholesky = llt.matrixL();
  const Eigen::MatrixXcd A = out.cholesky.triangularView<Eigen::Lower>().solve(Eigen::MatrixXcd::Identity(r, r));
  auto to_ortho = [&A](const Eigen::MatrixXcd& x) -> Eigen::MatrixXcd { return A * x * A.adjoint(); };

  std::vector<Eigen::MatrixXcd> dh(n), dbh(n);
  std::vector<std::vector<BiPoly>> holo_parts;
  for (int l = 0; l < n; ++l) {
    dh[l] = to_ortho(eval_bipoly_matrix(map_bipoly(out.frame.metric, [l](const BiPoly& b) { return b.d_holo(l); }), z));
    dbh[l] = to_ortho(eval_bipoly_matrix(map_bipoly(out.frame.metric, [l](const BiPoly& b) { return b.d_antiholo(l); }), z));
  }
  for (int l = 0; l < n; ++l) {
    const auto dl = map_bipoly(out.frame.metric, [l](const BiPoly& b) { return b.d_holo(l); });
    for (int v = 0; v < n; ++v) {
      const Eigen::MatrixXcd ddh =
          to_ortho(eval_bipoly_matrix(map_bipoly(dl, [v](const BiPoly& b) { return b.d_antiholo(v); }), z));
      const Eigen::MatrixXcd theta = -ddh + dh[l] * dbh[v];
      for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) out.orthonormal(a, b, l, v) = theta(a, b);
    }
  }
  return out;
}

NakanoTensor kernel_curvature_second_fundamental(const GeneratorSystem& G, const Point& z) {
  const KernelFrame frame = kernel_frame(G, z);
  const int r = frame.rank();
  const int n = G.n();
  const int p = G.p();
  NakanoTensor theta(r, n);
  if (r == 0) return theta;

  const GeneratorJet jet = evaluate(G, z);
  const CVector u = jet.g.conjugate() / std::sqrt(jet.norm2);
  Eigen::LLT<Eigen::MatrixXcd> llt(frame.metric_at(z));
  const Eigen::MatrixXcd L = llt.matrixL();
  const Eigen::MatrixXcd A = L.triangularView<Eigen::Lower>().solve(Eigen::MatrixXcd::Identity(r, r));

  // s(a, l) = <d_l e~_a, u>
  Eigen::MatrixXcd s(r, n);
  for (int l = 0; l < n; ++l) {
    Eigen::MatrixXcd de(r, p);
    for (int a = 0; a < r; ++a)
      for (int i = 0; i < p; ++i) de(a, i) = frame.rows[a][i].partial(l).eval(z);
    s.col(l) = (A * de) * u.conjugate();
  }
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int l = 0; l < n; ++l)
        for (int v = 0; v < n; ++v) theta(a, b, l, v) = -s(a, l) * std::conj(s(b, v));
  return theta;
}

double nakano_form_kernel_frame(const GeneratorSystem& G, const Point& z, const CTensor& v_frame) {
  const KernelCurvature k = kernel_curvature(G, z);
  if (v_frame.rows() != k.frame.rank() || v_frame.cols() != G.n()) {
    throw ShapeError("nakano_form_kernel_frame: v_frame must be (p-1) x n");
  }
  if (k.frame.rank() == 0) return 0.0;
  // coordinates in the orthonormal frame L^{-1} e are L^T v
  const CTensor v_ortho = k.cholesky.transpose() * v_frame;
  return k.orthonormal.form(v_ortho);
}

double nakano_form_kernel_closed(const GeneratorSystem& G, const Point& z, const CTensor& v) {
  const GeneratorJet jet = evaluate(G, z);
  if (!(jet.norm2 > 0.0)) throw SingularityError("nakano_form_kernel_closed: all generators vanish at the point");
  const int p = G.p();
  const int n = G.n();
  if (v.rows() != p || v.cols() != n) throw ShapeError("nakano_form_kernel_closed: v must be p x n");

  const double gnorm = std::sqrt(jet.norm2);
  for (int l = 0; l < n; ++l) {
    const double defect = std::abs(jet.g.dot(v.col(l).conjugate()));
    if (defect > 1e-10 * std::max(1.0, gnorm * v.col(l).norm())) {
      throw DomainError("nakano_form_kernel_closed: v violates the kernel constraint in column " +
                        std::to_string(l));
    }
  }

  cplx sum = 0.0;
  for (int j = 0; j < p; ++j)
    for (int m = 0; m < p; ++m)
      for (int l = 0; l < n; ++l)
        sum += std::conj(jet.g(m)) * (jet.g(m) * jet.grad(j, l) - jet.g(j) * jet.grad(m, l)) * v(j, l);
  return -std::norm(sum) / (jet.norm2 * jet.norm2 * jet.norm2);
}

HermitianForm twisted_domination(const GeneratorSystem& G, const Point& z, double gamma) {
  const int q = G.q();
  if (!(gamma >= q)) {
    throw PreconditionError("twisted_domination: gamma = " + std::to_string(gamma) + " < q = " + std::to_string(q));
  }
  const KernelCurvature k = kernel_curvature(G, z);
  const int r = k.frame.rank();
  const int n = G.n();
  const HermitianForm omega = log_hessian(G, z);

  NakanoTensor m = k.orthonormal;
  for (int a = 0; a < r; ++a)
    for (int l = 0; l < n; ++l)
      for (int v = 0; v < n; ++v) {
        m(a, a, l, v) += gamma * omega(l, v);
        m(a, a, l, v) -= (gamma - q) * omega(l, v);
      }
  return m.flatten();
}

HermitianForm fbtr(const GeneratorSystem& G, const MultiPoly& f, const PshWeight& psi, double gamma,
                   const Point& z) {
  const GeneratorJet jet = evaluate(G, z);
  const CTensor F = dbar_datum(jet, f.eval(z));
  const double w = std::exp(-psi.value(z)) / std::pow(jet.norm2, G.q() + gamma);
  return HermitianForm(w * (F.adjoint() * F));
}

double verify_5_4(const GeneratorSystem& G, const MultiPoly& f, const PshWeight& psi, double gamma,
                  const Point& z) {
  const GeneratorJet jet = evaluate(G, z);
  const cplx fz = f.eval(z);
  const CTensor F = dbar_datum(jet, fz);
  const double e = std::exp(-psi.value(z));
  const double tw = std::pow(jet.norm2, G.q() + gamma);
  const HermitianForm trace_side(e / tw * (F.adjoint() * F));
  const double phi = std::norm(fz) * e / (gamma * tw * jet.norm2);
  HermitianForm omega_gamma = log_hessian(jet);
  omega_gamma *= gamma * phi;

  // Both sides can vanish identically (e.g. proportional generators), leaving
  // only rounding noise; floor the scale at the size of the individual terms.
  const double terms = std::norm(fz) * e / tw * jet.grad.squaredNorm() / jet.norm2;
  const double scale = std::max({trace_side.max_abs_entry(), omega_gamma.max_abs_entry(), 1e-3 * terms});
  if (scale == 0.0) return 0.0;
  return (omega_gamma - trace_side).max_abs_entry() / scale;
}

VariantSides variant_inequality_sides(const GeneratorSystem& G, const Point& z, WeightVariant which) {
  const GeneratorJet jet = evaluate(G, z);
  if (!(jet.norm2 > 0.0)) throw SingularityError("variant_inequality_check: all generators vanish at the point");
  const double s = jet.norm2;
  // d_l dbar_v s and d_l s
  const Eigen::MatrixXcd dds = jet.grad.transpose() * jet.grad.conjugate();
  const CVector ds = jet.grad.transpose() * jet.g.conjugate();
  const Eigen::MatrixXcd dsds = ds * ds.adjoint();
  const HermitianForm omega = log_hessian(jet);

  switch (which) {
    case WeightVariant::A: {
      // h(s) = log(1 + s): h' = 1/(1+s), h'' = -1/(1+s)^2
      const HermitianForm lhs(dds / (1.0 + s) - dsds / ((1.0 + s) * (1.0 + s)));
      return {lhs, (s / (1.0 + s)) * omega};
    }
    case WeightVariant::C: {
      if (!(s < 1.0)) {
        throw PreconditionError("variant_inequality_check(c): needs |g|^2 < 1, got " + std::to_string(s));
      }
      // h(s) = log(-log s): h' = 1/(s log s), h'' = -(log s + 1)/(s log s)^2
      const double ls = std::log(s);
      const double h1 = 1.0 / (s * ls);
      const double h2 = -(ls + 1.0) / ((s * ls) * (s * ls));
      const HermitianForm lhs(-(h1 * dds + h2 * dsds));
      return {lhs, (1.0 / (-ls)) * omega};
    }
  }
  throw DomainError("variant_inequality_check: unknown variant");
}

HermitianForm variant_inequality_check(const GeneratorSystem& G, const Point& z, WeightVariant which) {
  const VariantSides sides = variant_inequality_sides(G, z, which);
  return sides.lhs - sides.rhs;
}

}  // namespace skoda
