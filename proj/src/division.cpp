#include "skoda/division.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <cmath>
#include <map>
#include <string>
#include <tuple>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "skoda/errors.hpp"

namespace skoda {

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::Skoda: return "skoda";
    case Variant::A: return "a";
    case Variant::B: return "b";
    case Variant::C: return "c";
  }
  return "?";
}

namespace {


/// Coefficient matrix of (h_1..h_p) -> sum h_j g_j with deg h_j <= d.
/// Column j * M + m holds monomial m of h_j; rows are indexed by exponent.
struct CoeffSystem {
  std::vector<Exponent> monos;
  std::map<Exponent, int> rows;
  Eigen::MatrixXcd A;
};

int row_of(std::map<Exponent, int>& rows, const Exponent& e) {
  auto [it, inserted] = rows.try_emplace(e, static_cast<int>(rows.size()));
  return it->second;
}

CoeffSystem build_system(const GeneratorSystem& G, int d, const MultiPoly* f) {
  if (d < 0) throw DomainError("division: ansatz degree must be >= 0, got " + std::to_string(d));
  CoeffSystem sys;
  sys.monos = monomials_up_to(G.n(), d);
  const int M = static_cast<int>(sys.monos.size());
  const int p = G.p();

  std::vector<std::tuple<int, int, cplx>> entries;
  for (int j = 0; j < p; ++j) {
    for (const auto& [e, c] : G[j].terms()) {
      for (int m = 0; m < M; ++m) {
        Exponent sum = e;
        for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += sys.monos[m][k];
        entries.emplace_back(row_of(sys.rows, sum), j * M + m, c);
      }
    }
  }
  if (f != nullptr) {
    for (const auto& [e, c] : f->terms()) row_of(sys.rows, e);
  }
  sys.A = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(sys.rows.size()), p * M);
  for (const auto& [r, col, c] : entries) sys.A(r, col) += c;
  return sys;
}

PolyTuple tuple_from(const CoeffSystem& sys, const CVector& x, int p, int nvars) {
  const int M = static_cast<int>(sys.monos.size());
  double scale = x.size() ? x.cwiseAbs().maxCoeff() : 0.0;
  PolyTuple h(p, MultiPoly(nvars));
  for (int j = 0; j < p; ++j)
    for (int m = 0; m < M; ++m) {
      const cplx c = x(j * M + m);
      if (std::abs(c) > 1e-14 * scale) h[j].add_term(sys.monos[m], c);
    }
  return h;
}

/// Reduced row echelon form with partial pivoting, in place; returns the rank.
int rref(Eigen::MatrixXcd& m, double tol) {
  int row = 0;
  for (Eigen::Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Eigen::Index piv;
    const double best = m.col(col).tail(m.rows() - row).cwiseAbs().maxCoeff(&piv);
    if (best <= tol) continue;
    piv += row;
    m.row(row).swap(m.row(piv));
    m.row(row) /= m(row, col);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (r != row && m(r, col) != cplx(0.0)) m.row(r) -= m(r, col) * m.row(row);
    }
    ++row;
  }
  return row;
}

double max_abs_or_zero(const MultiPoly& f) { return f.is_zero() ? 0.0 : f.max_abs_coeff(); }

}  // namespace

std::vector<PolyTuple> syzygy_basis(const GeneratorSystem& G, int d) {
  const CoeffSystem sys = build_system(G, d, nullptr);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sys.A, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  int rank = 0;
  while (rank < sv.size() && sv(rank) > kDivisionRankThreshold * smax) ++rank;
  const Eigen::Index nullity = sys.A.cols() - rank;
  if (nullity == 0) return {};

  Eigen::MatrixXcd basis = svd.matrixV().rightCols(nullity).transpose();
  rref(basis, 1e-12);
  std::vector<PolyTuple> out;
  for (Eigen::Index k = 0; k < nullity; ++k) {
    out.push_back(tuple_from(sys, basis.row(k).transpose(), G.p(), G.n()));
  }
  return out;
}

double division_residual(const GeneratorSystem& G, const MultiPoly& f, const PolyTuple& h) {
  if (static_cast<int>(h.size()) != G.p()) throw ShapeError("division_residual: need one coefficient per generator");
  MultiPoly r = f;
  for (int j = 0; j < G.p(); ++j) r -= h[j] * G[j];
  return max_abs_or_zero(r);
}

ParticularResult particular_solution(const GeneratorSystem& G, const MultiPoly& f, int d) {
  if (f.nvars() != G.n()) throw ShapeError("particular_solution: f and G disagree on the variable count");
  const CoeffSystem sys = build_system(G, d, &f);
  CVector b = CVector::Zero(sys.A.rows());
  for (const auto& [e, c] : f.terms()) b(sys.rows.at(e)) = c;

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sys.A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(kDivisionRankThreshold);
  const CVector x = svd.solve(b);

  ParticularResult out;
  out.h = tuple_from(sys, x, G.p(), G.n());
  out.residual = division_residual(G, f, out.h);
  out.feasible = out.residual <= kFeasibleTol * (1.0 + max_abs_or_zero(f));
  return out;
}

double norm_weight(const DivisionProblem& P, const Point& z) {
  const double s = gnorm2(P.G, z).value;
  if (s < kNodeFloor) return std::numeric_limits<double>::quiet_NaN();
  const int q = P.G.q();
  const double e = std::exp(-P.psi.value(z));
  switch (P.variant) {
    case Variant::Skoda: return e / std::pow(s, q + P.gamma);
    case Variant::A: return e / (std::pow(s, q) * (1.0 + s));
    case Variant::B: return std::exp(-P.phi.value(z)) * e / std::pow(s, q);
    case Variant::C: return -std::log(s) * e / std::pow(s, q);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

GridSum weighted_norm(const DivisionProblem& P, const PolyTuple& h, const QuadratureGrid& grid) {
  return grid_sum(
      [&](const Point& z) {
        const double w = norm_weight(P, z);
        if (!std::isfinite(w)) return w;
        double sum = 0.0;
        for (const auto& hj : h) sum += std::norm(hj.eval(z));
        return sum == 0.0 ? 0.0 : sum * w;
      },
      grid);
}

namespace {

void validate(const DivisionProblem& P) {
  if (!(P.gamma > 0.0) || !std::isfinite(P.gamma)) {
    throw DomainError("division: gamma must be positive, got " + std::to_string(P.gamma));
  }
  if (P.f.nvars() != P.G.n()) throw ShapeError("division: f and G disagree on the variable count");
  if (P.domain.dim() != P.G.n()) throw ShapeError("division: domain dimension differs from the variable count");
  if (P.psi.nvars() != P.G.n()) throw ShapeError("division: psi has the wrong variable count");
  if (P.variant == Variant::B && P.phi.nvars() != P.G.n()) throw ShapeError("division: phi has the wrong variable count");
}

/// Density of the constant whose finiteness is the hypothesis.
Density constant_density(const DivisionProblem& P, std::atomic<bool>& infinite_trace) {
  return [&P, &infinite_trace](const Point& z) -> double {
    const double f2 = std::norm(P.f.eval(z));
    if (f2 == 0.0) return 0.0;
    const double s = gnorm2(P.G, z).value;
    if (s < kNodeFloor) return std::numeric_limits<double>::quiet_NaN();
    const int q = P.G.q();
    const double e = std::exp(-P.psi.value(z));
    switch (P.variant) {
      case Variant::Skoda: return f2 * e / std::pow(s, q + 1 + P.gamma);
      case Variant::A: return f2 * (s + q * (1.0 + s)) * e / (std::pow(s, q + 2) * (1.0 + s));
      case Variant::B: {
        const ExtendedValue tr = tr_omega(log_hessian(P.G, z), P.phi.hessian(z));
        if (tr.infinite) {
          infinite_trace = true;
          return std::numeric_limits<double>::infinity();
        }
        return f2 * (1.0 + tr.value) * std::exp(-P.phi.value(z)) * e / std::pow(s, q + 1);
      }
      case Variant::C: {
        const double L = -std::log(s);
        return f2 * (L + q * L * L) * e / std::pow(s, q + 1);
      }
    }
    return std::numeric_limits<double>::quiet_NaN();
  };
}

double max_gnorm2(const GeneratorSystem& G, const QuadratureGrid& grid) {
  double m = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) m = std::max(m, gnorm2(G, grid.node(i)).value);
  return m;
}

void check_variant_preconditions(const DivisionProblem& P, const QuadratureGrid& grid, const QuadratureGrid& fine) {
  if (P.variant == Variant::B) {
    bool curved = P.phi.c1() > 0.0;
    for (const auto& t : P.phi.logs()) curved = curved || t.kappa > 0.0;
    if (!curved) throw PreconditionError("variant b: phi must have a nonzero complex Hessian");
  }
  if (P.variant == Variant::C) {
    const double m = std::max(max_gnorm2(P.G, grid), max_gnorm2(P.G, fine));
    if (!(m < 1.0)) {
      throw PreconditionError("variant c: needs |g|^2 < 1 on the grid, max is " + std::to_string(m));
    }
  }
}

double bound_factor(const DivisionProblem& P) {
  return P.variant == Variant::Skoda ? 1.0 + P.G.q() / P.gamma : 1.0;
}

DivisionSolution solve(const DivisionProblem& P) {
  validate(P);
  const QuadratureGrid grid = build_grid(P.domain, P.radial, P.angular);
  const QuadratureGrid fine = build_grid(P.domain, 2 * P.radial, P.angular);
  check_variant_preconditions(P, grid, fine);

  DivisionSolution out;
  out.variant = P.variant;
  out.h.assign(P.G.p(), MultiPoly(P.G.n()));

  if (!P.f.is_zero()) {
    std::atomic<bool> infinite_trace{false};
    out.constant_integral = integrate(constant_density(P, infinite_trace), grid);
    if (infinite_trace) {
      throw HypothesisFailure("the trace term of the variant b constant is infinite on the grid");
    }
    if (out.constant_integral.diverged || !std::isfinite(out.constant_integral.value)) {
      throw HypothesisFailure("the constant integral diverges: " + std::to_string(out.constant_integral.value) +
                              " grows to " + std::to_string(out.constant_integral.refined_value) +
                              " under radial refinement");
    }
    out.constant = out.constant_integral.value;
  }
  out.bound_theorem = bound_factor(P) * out.constant;
  out.bound_constructive = 2.0 * out.bound_theorem;

  if (P.f.is_zero()) {
    out.meets_theorem = out.meets_constructive = true;
    return out;
  }

  const ParticularResult part = particular_solution(P.G, P.f, P.degree);
  if (!part.feasible) {
    throw InfeasibleDivision("f is not in the ideal at ansatz degree " + std::to_string(P.degree), part.residual);
  }
  const std::vector<PolyTuple> syz = syzygy_basis(P.G, P.degree);
  out.syzygies = static_cast<int>(syz.size());

  std::vector<PolyTuple> basis{part.h};
  basis.insert(basis.end(), syz.begin(), syz.end());
  const Density w = [&P](const Point& z) { return norm_weight(P, z); };
  const WeightedGram gb = weighted_gram(grid, basis, w);
  const WeightedGram gr = weighted_gram(fine, basis, w);
  out.skipped_nodes = gb.skipped_nodes;

  // freeze syzygies whose norm on the grid is out of all proportion
  const Eigen::Index K = static_cast<Eigen::Index>(basis.size());
  std::vector<double> diag(K);
  for (Eigen::Index k = 0; k < K; ++k) diag[k] = gb.gram(k, k).real();
  std::vector<double> sorted = diag;
  std::nth_element(sorted.begin(), sorted.begin() + K / 2, sorted.end());
  const double median = sorted[K / 2];
  std::vector<Eigen::Index> active{0};
  for (Eigen::Index k = 1; k < K; ++k) {
    if (!(diag[k] > 0.0) || !std::isfinite(diag[k])) continue;
    if (diag[k] > kFreezeRatio * median) {
      ++out.frozen_syzygies;
      continue;
    }
    active.push_back(k);
  }
  if (!(diag[0] > 0.0) || !std::isfinite(diag[0])) {
    throw InfeasibleDivision("particular solution has no usable weighted norm on the grid", part.residual);
  }

  // Jacobi-scaled Gram forms on the base and refined grids
  const Eigen::Index A = static_cast<Eigen::Index>(active.size());
  Eigen::VectorXd D(A);
  Eigen::MatrixXcd Bs(A, A), Rs(A, A);
  for (Eigen::Index a = 0; a < A; ++a) D(a) = 1.0 / std::sqrt(diag[active[a]]);
  for (Eigen::Index a = 0; a < A; ++a)
    for (Eigen::Index b = 0; b < A; ++b) {
      Bs(a, b) = D(a) * gb.gram(active[a], active[b]) * D(b);
      Rs(a, b) = D(a) * gr.gram(active[a], active[b]) * D(b);
    }
  Bs = 0.5 * (Bs + Bs.adjoint()).eval();
  Rs = 0.5 * (Rs + Rs.adjoint()).eval();

  // whiten the base form, dropping its numerically null directions
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> be(Bs);
  const double lmax = be.eigenvalues().maxCoeff();
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < A; ++i) {
    if (be.eigenvalues()(i) > kDivisionRankThreshold * lmax) kept.push_back(i);
  }
  Eigen::MatrixXcd W(A, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) {
    W.col(c) = be.eigenvectors().col(kept[c]) / std::sqrt(be.eigenvalues()(kept[c]));
  }

  // directions whose norm is stable under refinement have finite norm
  Eigen::MatrixXcd M = W.adjoint() * Rs * W;
  M = 0.5 * (M + M.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> re(M);
  std::vector<Eigen::Index> finite;
  for (Eigen::Index i = 0; i < re.eigenvalues().size(); ++i) {
    if (re.eigenvalues()(i) < kFiniteGrowth) finite.push_back(i);
  }
  out.finite_directions = static_cast<int>(finite.size());
  Eigen::MatrixXcd Y(A, static_cast<Eigen::Index>(finite.size()));
  for (std::size_t c = 0; c < finite.size(); ++c) Y.col(c) = W * re.eigenvectors().col(finite[c]);

  // columns of Y are orthonormal for Bs: minimize |y|^2 subject to c_0 = 1
  const Eigen::RowVectorXcd r0 = Y.row(0);
  const double nr = r0.squaredNorm();
  if (finite.empty() || !(nr > 1e-10)) {
    throw InfeasibleDivision("no solution of finite weighted norm at ansatz degree " + std::to_string(P.degree),
                             part.residual);
  }
  const CVector y = r0.adjoint() * (1.0 / (D(0) * nr));
  const CVector x = Y * y;

  // the Gram form is quadratic in the conjugated coefficients
  for (Eigen::Index a = 0; a < A; ++a) {
    const cplx c = D(a) * std::conj(x(a));
    for (int j = 0; j < P.G.p(); ++j) out.h[j] += basis[active[a]][j] * c;
  }
  double hmax = 0.0;
  for (const auto& hj : out.h) hmax = std::max(hmax, max_abs_or_zero(hj));
  for (auto& hj : out.h) hj = hj.pruned(1e-14 * hmax);

  out.residual_max_coeff = division_residual(P.G, P.f, out.h);
  out.weighted_norm = weighted_norm(P, out.h, grid).value;
  out.meets_theorem = out.weighted_norm <= out.bound_theorem * (1.0 + kMeetsRel);
  out.meets_constructive = out.weighted_norm <= out.bound_constructive * (1.0 + kMeetsRel);
  return out;
}

}  // namespace

DivisionSolution skoda_divide(const DivisionProblem& P) {
  if (P.variant != Variant::Skoda) throw DomainError("skoda_divide: problem carries a variant weight");
  return solve(P);
}

DivisionSolution variant_divide(const DivisionProblem& P) {
  if (P.variant == Variant::Skoda) throw DomainError("variant_divide: problem has no variant weight");
  return solve(P);
}

DivisionSolution divide(const DivisionProblem& P) { return solve(P); }

MultiPoly expand(const GeneratorSystem& G, const ExpansionNode& node) {
  if (node.leaf()) return node.value;
  MultiPoly sum(G.n());
  for (int j = 0; j < G.p(); ++j) sum += G[j] * expand(G, node.children[j]);
  return sum;
}

int tree_depth(const ExpansionNode& node) {
  int d = 0;
  for (const auto& c : node.children) d = std::max(d, tree_depth(c));
  return node.leaf() ? 0 : d + 1;
}

namespace {

void grow(const GeneratorSystem& G, ExpansionNode& node, int m0, int N0, IteratedDivision& out) {
  if (node.value.is_zero() || node.budget - m0 < N0) return;
  const int d = node.budget - m0;
  const ParticularResult part = particular_solution(G, node.value, d);
  if (!part.feasible) {
    out.complete = false;
    if (out.diagnostic.empty()) {
      out.diagnostic = "stage with budget " + std::to_string(node.budget) + " is infeasible at degree " +
                       std::to_string(d) + " (residual " + std::to_string(part.residual) + ")";
    }
    return;
  }
  for (int j = 0; j < G.p(); ++j) {
    node.children.push_back(ExpansionNode{part.h[j], d, {}});
    grow(G, node.children.back(), m0, N0, out);
  }
}

}  // namespace

IteratedDivision iterated_division(const GeneratorSystem& G, const MultiPoly& f, int m0, int N0) {
  if (m0 < 1) throw DomainError("iterated_division: m0 must be >= 1");
  if (N0 < 0) throw DomainError("iterated_division: N0 must be >= 0");
  if (f.nvars() != G.n()) throw ShapeError("iterated_division: f and G disagree on the variable count");
  IteratedDivision out;
  if (f.is_zero()) return out;

  const int budget = f.degree();
  out.expected_depth = budget >= N0 ? (budget - N0) / m0 : 0;
  out.root = ExpansionNode{f, budget, {}};
  grow(G, *out.root, m0, N0, out);
  out.depth = tree_depth(*out.root);
  MultiPoly r = f - expand(G, *out.root);
  out.reexpansion_residual = max_abs_or_zero(r);
  return out;
}

}  // namespace skoda
