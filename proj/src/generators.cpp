#include "skoda/generators.hpp"

#include <string>

#include "skoda/errors.hpp"

namespace skoda {

GeneratorSystem::GeneratorSystem(std::vector<MultiPoly> g) : g_(std::move(g)) {
  if (g_.empty()) throw DomainError("GeneratorSystem: need at least one generator");
  n_ = g_.front().nvars();
  bool any_nonzero = false;
  for (const auto& gj : g_) {
    if (gj.nvars() != n_) throw ShapeError("GeneratorSystem: generators disagree on the number of variables");
    any_nonzero = any_nonzero || !gj.is_zero();
  }
  if (!any_nonzero) throw DomainError("GeneratorSystem: generators are all identically zero");
  dg_.resize(g_.size());
  for (std::size_t j = 0; j < g_.size(); ++j) {
    for (int l = 0; l < n_; ++l) dg_[j].push_back(g_[j].partial(l));
  }
}

GeneratorSystem GeneratorSystem::transformed(const CTensor& U) const {
  if (U.rows() != p() || U.cols() != p()) throw ShapeError("GeneratorSystem::transformed: U must be p x p");
  std::vector<MultiPoly> out(p(), MultiPoly(n_));
  for (int i = 0; i < p(); ++i) {
    for (int j = 0; j < p(); ++j) out[i] += U(i, j) * g_[j];
  }
  return GeneratorSystem(std::move(out));
}

GeneratorJet evaluate(const GeneratorSystem& G, const Point& z) {
  if (static_cast<int>(z.size()) != G.n()) throw ShapeError("evaluate: point has wrong dimension");
  GeneratorJet jet;
  jet.g.resize(G.p());
  jet.grad.resize(G.p(), G.n());
  for (int j = 0; j < G.p(); ++j) {
    jet.g(j) = G[j].eval(z);
    for (int l = 0; l < G.n(); ++l) jet.grad(j, l) = G.partial(j, l).eval(z);
  }
  jet.norm2 = jet.g.squaredNorm();
  return jet;
}

Gnorm2 gnorm2(const GeneratorSystem& G, const Point& z) {
  double s = 0.0;
  for (int j = 0; j < G.p(); ++j) s += std::norm(G[j].eval(z));
  return {s, s == 0.0};
}

CTensor grad_matrix(const GeneratorSystem& G, const Point& z) { return evaluate(G, z).grad; }

namespace {

void require_nonsingular(const GeneratorJet& jet, const char* what) {
  if (!(jet.norm2 > 0.0)) throw SingularityError(std::string(what) + ": all generators vanish at the point");
}

}  // namespace

HermitianForm log_hessian(const GeneratorJet& jet) {
  require_nonsingular(jet, "log_hessian");
  const double s = jet.norm2;
  // grad^T conj(grad): (l, v) -> sum_j d_l g_j conj(d_v g_j)
  const Eigen::MatrixXcd gram = jet.grad.transpose() * jet.grad.conjugate();
  // t_l = sum_j d_l g_j conj(g_j)
  const CVector t = jet.grad.transpose() * jet.g.conjugate();
  return HermitianForm(gram / s - (t * t.adjoint()) / (s * s));
}

HermitianForm log_hessian(const GeneratorSystem& G, const Point& z) { return log_hessian(evaluate(G, z)); }

HermitianForm log_hessian_wedge(const GeneratorJet& jet) {
  require_nonsingular(jet, "log_hessian_wedge");
  const Eigen::Index p = jet.g.size();
  const Eigen::Index n = jet.grad.cols();
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
  CVector minor(n);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index k = j + 1; k < p; ++k) {
      for (Eigen::Index l = 0; l < n; ++l) minor(l) = jet.grad(j, l) * jet.g(k) - jet.grad(k, l) * jet.g(j);
      acc += minor * minor.adjoint();
    }
  }
  return HermitianForm(acc / (jet.norm2 * jet.norm2));
}

HermitianForm log_hessian_wedge(const GeneratorSystem& G, const Point& z) {
  return log_hessian_wedge(evaluate(G, z));
}

CTensor dbar_datum(const GeneratorJet& jet, cplx f_value) {
  require_nonsingular(jet, "dbar_datum");
  const double s = jet.norm2;
  // sigma_v = sum_k g_k conj(d_v g_k)
  const CVector sigma = jet.grad.adjoint() * jet.g;
  CTensor F = jet.grad.conjugate() / s - jet.g.conjugate() * sigma.transpose() / (s * s);
  return f_value * F;
}

CTensor dbar_datum(const GeneratorSystem& G, const MultiPoly& f, const Point& z) {
  return dbar_datum(evaluate(G, z), f.eval(z));
}

}  // namespace skoda
