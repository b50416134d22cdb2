#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "skoda/errors.hpp"
#include "skoda/poly.hpp"
#include "skoda/random.hpp"

using namespace skoda;

namespace {

MultiPoly z1sq_z2() { return MultiPoly::monomial(2, {2, 1}); }

double max_diff(const MultiPoly& a, const MultiPoly& b) {
  const MultiPoly d = a - b;
  return d.is_zero() ? 0.0 : d.max_abs_coeff();
}

}  // namespace

TEST_CASE("power rule") {
  const MultiPoly d = z1sq_z2().partial(0);
  CHECK(d.terms().size() == 1);
  CHECK(d.coeff({1, 1}) == cplx(2.0));
  CHECK(z1sq_z2().partial(1).coeff({2, 0}) == cplx(1.0));
  CHECK(MultiPoly::constant(2, 5.0).partial(0).is_zero());
}

TEST_CASE("evaluation by substitution") {
  const Point z{2.0, 3.0};
  CHECK(z1sq_z2().eval(z) == cplx(12.0));
  const MultiPoly p = MultiPoly::monomial(1, {3}, cplx(0, 1)) + MultiPoly::constant(1, 2.0);
  const cplx w(0.3, -1.1);
  CHECK(std::abs(p.eval(Point{w}) - (cplx(0, 1) * w * w * w + 2.0)) < 1e-15);
}

TEST_CASE("ring identity and zero pruning") {
  const MultiPoly z = MultiPoly::variable(1, 0);
  const MultiPoly one = MultiPoly::constant(1, 1.0);
  const MultiPoly prod = (z + one) * (z - one);
  CHECK(prod.terms().size() == 2);
  CHECK(prod.coeff({2}) == cplx(1.0));
  CHECK(prod.coeff({0}) == cplx(-1.0));
  CHECK(prod.coeff({1}) == cplx(0.0));
  CHECK((z - z).is_zero());
  CHECK((z - z).degree() == -1);
  CHECK(prod.degree() == 2);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(z1sq_z2().partial(2), DomainError);
  CHECK_THROWS_AS(z1sq_z2().partial(-1), DomainError);
  MultiPoly p(2);
  CHECK_THROWS_AS(p.add_term({1}, 1.0), ShapeError);
  CHECK_THROWS_AS(p.add_term({-1, 0}, 1.0), DomainError);
  CHECK_THROWS_AS(z1sq_z2() + MultiPoly::variable(1, 0), ShapeError);
  CHECK_THROWS_AS(z1sq_z2().eval(Point{1.0}), ShapeError);
}

TEST_CASE("monomial enumeration") {
  // C(n + d, d) monomials of degree <= d
  CHECK(monomials_up_to(1, 4).size() == 5);
  CHECK(monomials_up_to(2, 3).size() == 10);
  CHECK(monomials_up_to(3, 2).size() == 10);
  const auto m = monomials_up_to(2, 1);
  CHECK(m[0] == Exponent{0, 0});
  CHECK(m[1] == Exponent{1, 0});
  CHECK(m[2] == Exponent{0, 1});
}

TEST_CASE("arithmetic agrees with pointwise evaluation") {
  for (std::uint64_t i = 0; i < 200; ++i) {
    auto rng = instance_rng(21, i);
    const int n = 1 + static_cast<int>(i % 3);
    const MultiPoly a = random_poly(rng, n, 3, 4);
    const MultiPoly b = random_poly(rng, n, 3, 4);
    const Point z = random_point(rng, n);
    const cplx s = random_cplx(rng);
    REQUIRE(std::abs((a * b).eval(z) - a.eval(z) * b.eval(z)) < 1e-12);
    REQUIRE(std::abs((a + b).eval(z) - (a.eval(z) + b.eval(z))) < 1e-13);
    REQUIRE(std::abs((s * a).eval(z) - s * a.eval(z)) < 1e-13);
  }
}

TEST_CASE("product rule and symmetry of mixed partials") {
  for (std::uint64_t i = 0; i < 100; ++i) {
    auto rng = instance_rng(22, i);
    const MultiPoly a = random_poly(rng, 2, 3, 4);
    const MultiPoly b = random_poly(rng, 2, 3, 4);
    REQUIRE(max_diff((a * b).partial(0), a.partial(0) * b + a * b.partial(0)) < 1e-13);
    REQUIRE(max_diff(a.partial(0).partial(1), a.partial(1).partial(0)) == 0.0);
  }
}

TEST_CASE("holomorphic derivative against a complex difference quotient") {
  auto rng = instance_rng(23, 0);
  const MultiPoly a = random_poly(rng, 2, 4, 5);
  const Point z = random_point(rng, 2);
  const double h = 1e-5;
  for (int axis = 0; axis < 2; ++axis) {
    Point zp = z, zm = z;
    zp[axis] += h;
    zm[axis] -= h;
    const cplx fd = (a.eval(zp) - a.eval(zm)) / (2.0 * h);
    CHECK(std::abs(fd - a.partial(axis).eval(z)) < 1e-8);
  }
}

TEST_CASE("BiPoly derivatives act on one factor each") {
  auto rng = instance_rng(24, 0);
  const MultiPoly A = random_poly(rng, 2, 3, 4);
  const MultiPoly B = random_poly(rng, 2, 3, 4);
  const BiPoly h(A, B);
  const Point z = random_point(rng, 2);
  CHECK(std::abs(h.eval(z) - A.eval(z) * std::conj(B.eval(z))) < 1e-14);
  const cplx mixed = h.d_holo(0).d_antiholo(1).eval(z);
  CHECK(std::abs(mixed - A.partial(0).eval(z) * std::conj(B.partial(1).eval(z))) < 1e-13);

  // |A|^2 is real
  const BiPoly n2(A, A);
  CHECK(std::abs(n2.eval(z).imag()) < 1e-14);
  BiPoly sum = n2 + BiPoly(B, B);
  CHECK(sum.terms().size() == 2);
  CHECK(BiPoly(A, MultiPoly(2)).terms().empty());
}

TEST_CASE("pruning") {
  MultiPoly p(1);
  p.add_term({0}, 1.0);
  p.add_term({1}, 1e-20);
  CHECK(p.pruned(1e-15).terms().size() == 1);
  CHECK(p.max_abs_coeff() == 1.0);
}
