#pragma once

#include <optional>
#include <string>
#include <vector>

#include "skoda/generators.hpp"
#include "skoda/kernels.hpp"
#include "skoda/poly.hpp"
#include "skoda/psh_weight.hpp"
#include "skoda/quadrature.hpp"

namespace skoda {

/// Weight family for the division norm.
///   Skoda: e^{-psi} / |g|^{2(q+gamma)}
///   A:     e^{-psi} / (|g|^{2q} (1 + |g|^2))
///   B:     e^{-(phi+psi)} / |g|^{2q}
///   C:     log(1/|g|^2) e^{-psi} / |g|^{2q}      (needs |g| < 1 on the grid)
enum class Variant { Skoda, A, B, C };

const char* variant_name(Variant v);

/// |g|^2 below this is treated as a common zero; such nodes are skipped.
inline constexpr double kNodeFloor = 1e-14;
/// Singular values and Gram eigenvalues below this fraction of the largest are null.
inline constexpr double kDivisionRankThreshold = 1e-10;
/// Feasible when the coefficient residual is <= this times (1 + max |coeff f|).
inline constexpr double kFeasibleTol = 1e-10;
/// Syzygies whose Gram diagonal exceeds this multiple of the median are frozen.
inline constexpr double kFreezeRatio = 1e12;
/// Directions whose norm grows by this factor under radial refinement are divergent.
inline constexpr double kFiniteGrowth = 1.5;
/// Relative slack allowed when comparing a norm against a bound.
inline constexpr double kMeetsRel = 1e-9;

struct DivisionProblem {
  GeneratorSystem G;
  MultiPoly f;
  double gamma = 1.0;
  PshWeight psi;
  PshWeight phi;  ///< variant B only
  Domain domain;
  int radial = 128;
  int angular = 64;
  int degree = 2;
  Variant variant = Variant::Skoda;
};

/// Syzygies of G with every entry of degree <= d, as an echelon basis of the
/// nullspace of the coefficient map (h_1..h_p) -> sum h_j g_j.
std::vector<PolyTuple> syzygy_basis(const GeneratorSystem& G, int d);

struct ParticularResult {
  bool feasible = false;
  PolyTuple h;            ///< minimum-coefficient-norm least-squares solution
  double residual = 0.0;  ///< max |coeff| of f - sum h_j g_j
};

/// f = sum h_j g_j with deg h_j <= d. Infeasible when the least-squares
/// residual exceeds 1e-10 (1 + max |coeff f|).
ParticularResult particular_solution(const GeneratorSystem& G, const MultiPoly& f, int d);

/// max |coeff| of f - sum h_j g_j.
double division_residual(const GeneratorSystem& G, const MultiPoly& f, const PolyTuple& h);

struct DivisionSolution {
  Variant variant = Variant::Skoda;
  PolyTuple h;
  double residual_max_coeff = 0.0;
  double constant = 0.0;           ///< C-hat (Skoda) or C_1 / C_2 / C_3
  Integral constant_integral;
  double weighted_norm = 0.0;
  double bound_theorem = 0.0;      ///< (1 + q/gamma) C-hat, or C_i for the variants
  double bound_constructive = 0.0; ///< 2 * bound_theorem
  bool meets_theorem = false;
  bool meets_constructive = false;
  int syzygies = 0;
  int frozen_syzygies = 0;         ///< dropped by the diagonal-size rule
  int finite_directions = 0;       ///< dimension of the finite-norm solution subspace
  std::size_t skipped_nodes = 0;
};

/// Minimizes the weighted L^2 norm of h over {particular + span(syzygies)}.
///
/// Throws HypothesisFailure when the constant integral diverges,
/// InfeasibleDivision when f is not reachable at degree d or no combination
/// has finite norm, and PreconditionError for variant preconditions.
DivisionSolution skoda_divide(const DivisionProblem& P);
DivisionSolution variant_divide(const DivisionProblem& P);
/// Dispatches on P.variant.
DivisionSolution divide(const DivisionProblem& P);

/// Norm weight of the problem's variant at z (NaN below the node floor).
double norm_weight(const DivisionProblem& P, const Point& z);

/// Weighted norm sum_j int |h_j|^2 w over a grid.
GridSum weighted_norm(const DivisionProblem& P, const PolyTuple& h, const QuadratureGrid& grid);

/// Node of an iterated-division tree. Leaves carry a coefficient; inner
/// nodes carry one child per generator with value = sum_j g_j expand(child_j).
struct ExpansionNode {
  MultiPoly value;
  int budget = 0;
  std::vector<ExpansionNode> children;

  bool leaf() const noexcept { return children.empty(); }
};

struct IteratedDivision {
  std::optional<ExpansionNode> root;  ///< empty for f = 0
  int depth = 0;
  int expected_depth = 0;  ///< largest l with deg f - l m0 >= N0
  bool complete = true;
  std::string diagnostic;
  double reexpansion_residual = 0.0;
};

/// Divides f, then each coefficient, while the degree budget b satisfies
/// b - m0 >= N0; children get budget b - m0 and are sought with degree b - m0.
IteratedDivision iterated_division(const GeneratorSystem& G, const MultiPoly& f, int m0, int N0);

MultiPoly expand(const GeneratorSystem& G, const ExpansionNode& node);
int tree_depth(const ExpansionNode& node);

}  // namespace skoda
