#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "skoda/bundle.hpp"
#include "skoda/errors.hpp"
#include "skoda/random.hpp"
#include "skoda/sweeps.hpp"

using namespace skoda;

namespace {

MultiPoly z(int n = 1, int axis = 0) { return MultiPoly::variable(n, axis); }
MultiPoly c(int n, cplx v) { return MultiPoly::constant(n, v); }

Point usable_point(std::mt19937_64& rng, const GeneratorSystem& G, double radius = 1.0) {
  for (;;) {
    const Point pt = random_point(rng, G.n(), radius);
    if (gnorm2(G, pt).value > 1e-3) return pt;
  }
}

cplx ddbar_fd(const std::function<double(const Point&)>& u, const Point& z0, int l, int v, double h) {
  auto at = [&](cplx a, cplx b) {
    Point p = z0;
    p[l] += a;
    p[v] += b;
    return u(p);
  };
  auto d2 = [&](cplx e1, cplx e2) {
    return (at(h * e1, h * e2) - at(h * e1, -h * e2) - at(-h * e1, h * e2) + at(-h * e1, -h * e2)) / (4.0 * h * h);
  };
  const cplx i(0.0, 1.0);
  return 0.25 * (d2(1.0, 1.0) + d2(i, i) + i * (d2(1.0, i) - d2(i, 1.0)));
}

}  // namespace

TEST_CASE("kernel frame annihilates g identically") {
  const GeneratorSystem G({z(), c(1, 1.0)});
  const KernelFrame f = kernel_frame(G, {0.5});
  CHECK(f.pivot == 1);
  CHECK(f.rank() == 1);
  CHECK(f.rows_at(0, 0) == cplx(1.0));
  CHECK(f.rows_at(0, 1) == cplx(-0.5));
  CHECK(f.metric_at({0.5})(0, 0).real() == doctest::Approx(1.25));

  for (std::uint64_t i = 0; i < 50; ++i) {
    auto rng = instance_rng(41, i);
    const int n = 1 + static_cast<int>(i % 3);
    const int p = 2 + static_cast<int>(i % 3);
    const GeneratorSystem S = random_system(rng, n, p, 3);
    const Point pt = usable_point(rng, S);
    const KernelFrame k = kernel_frame(S, pt);
    for (int a = 0; a < k.rank(); ++a) {
      MultiPoly sum(n);
      for (int j = 0; j < p; ++j) sum += k.rows[a][j] * S[j];
      REQUIRE(sum.pruned(1e-14).is_zero());
    }
    REQUIRE((k.rows_at * evaluate(S, pt).g).norm() < 1e-13);
  }
  CHECK_THROWS_AS(kernel_frame(GeneratorSystem({z(), z() * z()}), {0.0}), SingularityError);
}

TEST_CASE("Nakano curvature examples") {
  // kernel of (z, 1) is spanned by (1, -z); curvature -1/(1+|z|^2)^2
  const GeneratorSystem G({z(), c(1, 1.0)});
  const KernelCurvature k = kernel_curvature(G, {0.0});
  CHECK(k.orthonormal(0, 0, 0, 0).real() == doctest::Approx(-1.0));
  CHECK(kernel_curvature(G, {1.0}).orthonormal(0, 0, 0, 0).real() == doctest::Approx(-0.25));

  const GeneratorSystem H({z(2, 0) * z(2, 1), c(2, 1.0)});
  CHECK(kernel_curvature(H, {0.0, 0.0}).orthonormal.flatten().max_abs_entry() == doctest::Approx(0.0));

  const GeneratorSystem K({c(2, 1.0), c(2, 2.0), c(2, cplx(0, 1))});
  CHECK(kernel_curvature(K, {0.3, -0.2}).orthonormal.flatten().max_abs_entry() == 0.0);

  const GeneratorSystem single({z()});
  CHECK(kernel_curvature(single, {0.5}).frame.rank() == 0);
  CHECK(nakano_form_kernel_frame(single, {0.5}, CTensor(0, 1)) == 0.0);
}

TEST_CASE("rank one: curvature is -ddbar log of the frame norm") {
  for (std::uint64_t i = 0; i < 10; ++i) {
    auto rng = instance_rng(42, i);
    const GeneratorSystem G = random_system(rng, 2, 2, 2);
    const Point pt = usable_point(rng, G, 0.6);
    const KernelCurvature k = kernel_curvature(G, pt);
    const KernelFrame frame = k.frame;
    auto u = [&](const Point& q) { return std::log(frame.metric_at(q)(0, 0).real()); };
    for (int l = 0; l < 2; ++l)
      for (int v = 0; v < 2; ++v) {
        const cplx fd = -ddbar_fd(u, pt, l, v, 1e-4);
        const cplx got = k.orthonormal(0, 0, l, v);
        REQUIRE(std::abs(fd - got) <= 1e-6 * std::max(1.0, std::abs(got)));
      }
  }
}

TEST_CASE("Chern connection curvature equals minus second fundamental form squared") {
  for (std::uint64_t i = 0; i < 300; ++i) {
    auto rng = instance_rng(43, i);
    const int n = 1 + static_cast<int>(i % 3);
    const int p = 2 + static_cast<int>((i / 3) % 3);
    const GeneratorSystem G = random_system(rng, n, p, 3);
    const Point pt = usable_point(rng, G);
    const NakanoTensor a = kernel_curvature(G, pt).orthonormal;
    const NakanoTensor b = kernel_curvature_second_fundamental(G, pt);
    const HermitianForm fa = a.flatten(), fb = b.flatten();
    const double scale = std::max(1.0, fa.max_abs_entry());
    REQUIRE((fa - fb).max_abs_entry() <= 1e-9 * scale);
    REQUIRE(a.hermitian_defect() <= 1e-10 * scale);
    REQUIRE(fa.max_eigenvalue() <= 1e-10 * scale);
  }
}

TEST_CASE("curvature spectrum is invariant under a unitary change of generators") {
  for (std::uint64_t i = 0; i < 100; ++i) {
    auto rng = instance_rng(44, i);
    const int n = 1 + static_cast<int>(i % 2);
    const int p = 2 + static_cast<int>(i % 3);
    const GeneratorSystem G = random_system(rng, n, p, 2);
    const Point pt = usable_point(rng, G);
    const GeneratorSystem UG = G.transformed(random_unitary(rng, p));
    const Eigen::VectorXd e1 = kernel_curvature(G, pt).orthonormal.flatten().eigenvalues();
    const Eigen::VectorXd e2 = kernel_curvature(UG, pt).orthonormal.flatten().eigenvalues();
    REQUIRE((e1 - e2).cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, e1.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("closed-form curvature rejects off-kernel vectors") {
  const GeneratorSystem G({z(), c(1, 1.0)});
  CTensor v(2, 1);
  v << 1.0, 1.0;
  CHECK_THROWS_AS(nakano_form_kernel_closed(G, {0.5}, v), DomainError);
  CHECK_THROWS_AS(nakano_form_kernel_closed(G, {0.5}, CTensor::Zero(3, 1)), ShapeError);
  // (1, -z) lies in the kernel
  v << 1.0, -0.5;
  CHECK(nakano_form_kernel_closed(G, {0.5}, v) == doctest::Approx(nakano_form_kernel_frame(G, {0.5}, CTensor::Ones(1, 1))));
}

TEST_CASE("twisted domination") {
  const GeneratorSystem G({z(), c(1, 1.0)});
  CHECK(twisted_domination(G, {0.0}, 1.0).max_abs_entry() < 1e-14);
  CHECK(twisted_domination(G, {0.0}, 2.0).max_abs_entry() < 1e-14);
  CHECK_THROWS_AS(twisted_domination(G, {0.0}, 0.5), PreconditionError);

  const GeneratorSystem H({z(2, 0), z(2, 1), c(2, 1.0)});
  CHECK_THROWS_AS(twisted_domination(H, {0.1, 0.2}, 1.5), PreconditionError);
  CHECK(twisted_domination(H, {0.1, 0.2}, 2.0).min_eigenvalue() >= -1e-12);
}

TEST_CASE("fiber trace form and tr_omega") {
  const GeneratorSystem G({z(), c(1, 1.0)});
  const HermitianForm b = fbtr(G, c(1, 1.0), PshWeight::zero(1), 1.0, {0.0});
  CHECK(b(0, 0).real() == doctest::Approx(1.0));

  for (std::uint64_t i = 0; i < 100; ++i) {
    auto rng = instance_rng(45, i);
    const int n = 1 + static_cast<int>(i % 3);
    const GeneratorSystem S = random_system(rng, n, 3, 2);
    const Point pt = usable_point(rng, S);
    const HermitianForm f = fbtr(S, random_poly(rng, n, 2, 3), random_psh(rng, n), 1.5, pt);
    REQUIRE(f.min_eigenvalue() >= -1e-12 * std::max(1.0, f.max_abs_entry()));
  }

  Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(3, 3);
  w(0, 0) = 2.0;
  w(1, 1) = 0.5;
  const HermitianForm omega(w);
  const ExtendedValue self = tr_omega(omega, omega);
  CHECK_FALSE(self.infinite);
  CHECK(self.value == doctest::Approx(2.0));
  CHECK(tr_omega(HermitianForm::zero(3), omega).value == 0.0);
  CHECK_FALSE(tr_omega(HermitianForm::zero(3), omega).infinite);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(3, 3);
  a(2, 2) = 1.0;
  CHECK(tr_omega(HermitianForm(a), omega).infinite);
}

TEST_CASE("fiber trace identity") {
  const GeneratorSystem G({z(), c(1, 1.0)});
  CHECK(verify_5_4(G, c(1, 1.0), PshWeight::zero(1), 1.0, {0.0}) < 1e-14);
  CHECK(verify_5_4(G, z() + c(1, 2.0), PshWeight(1, 0.1, 1.0), 0.7, {cplx(0.3, 0.4)}) < 1e-13);
  // proportional generators: both sides vanish
  const GeneratorSystem P({z(), 2.0 * z()});
  CHECK(verify_5_4(P, c(1, 1.0), PshWeight::zero(1), 1.0, {0.5}) < 1e-12);
}

TEST_CASE("weight variant examples") {
  const GeneratorSystem G({z(), c(1, 1.0)});
  const VariantSides a = variant_inequality_sides(G, {0.0}, WeightVariant::A);
  CHECK(a.lhs(0, 0).real() == doctest::Approx(0.5));
  CHECK(a.rhs(0, 0).real() == doctest::Approx(0.5));
  CHECK(std::abs(variant_inequality_check(G, {0.0}, WeightVariant::A)(0, 0)) < 1e-15);

  const GeneratorSystem K({c(1, 1.0), c(1, 0.5)});
  CHECK(variant_inequality_check(K, {0.2}, WeightVariant::A).max_abs_entry() == 0.0);

  // -ddbar log(-log|z/2|^2) = 1 / (|z|^2 L^2), L = -log(|z|^2 / 4)
  const GeneratorSystem H({0.5 * z()});
  const double L = -std::log(0.0025);
  const HermitianForm cform = variant_inequality_check(H, {0.1}, WeightVariant::C);
  CHECK(cform(0, 0).real() == doctest::Approx(1.0 / (0.01 * L * L)).epsilon(1e-12));
  CHECK(cform(0, 0).real() == doctest::Approx(2.7857).epsilon(1e-4));

  CHECK_THROWS_AS(variant_inequality_check(GeneratorSystem({c(1, 2.0)}), {0.0}, WeightVariant::C),
                  PreconditionError);
}

TEST_CASE("Cauchy-Schwarz against the inverse form") {
  for (std::uint64_t i = 0; i < 500; ++i) {
    auto rng = instance_rng(46, i);
    const int n = 1 + static_cast<int>(i % 4);
    const CTensor B = random_ctensor(rng, n, n);
    const HermitianForm A(B * B.adjoint());
    const CVector u = random_cvector(rng, n);
    const CVector xi = random_cvector(rng, n);
    const ExtendedValue inv = A.inverse_form(xi);
    if (inv.infinite) continue;
    const double lhs = std::norm(u.dot(xi));
    REQUIRE(lhs <= A.form(u) * inv.value * (1.0 + 1e-10) + 1e-14);
  }
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
  d(0, 0) = 1.0;
  CVector e(2);
  e << 0.0, 1.0;
  CHECK(HermitianForm(d).inverse_form(e).infinite);
  e << 2.0, 0.0;
  CHECK(HermitianForm(d).inverse_form(e).value == doctest::Approx(4.0));
}
