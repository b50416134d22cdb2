#include "skoda/random.hpp"

#include <Eigen/QR>

#include "skoda/poly.hpp"

namespace skoda {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::mt19937_64 instance_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{splitmix64(seed), splitmix64(seed ^ splitmix64(index + 1))};
  return std::mt19937_64(seq);
}

cplx random_cplx(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double re = u(rng);
  const double im = u(rng);
  return {re, im};
}

CTensor random_ctensor(std::mt19937_64& rng, int rows, int cols) {
  CTensor t(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) t(i, j) = random_cplx(rng);
  return t;
}

CVector random_cvector(std::mt19937_64& rng, int n) {
  CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = random_cplx(rng);
  return v;
}

Point random_point(std::mt19937_64& rng, int n, double radius) {
  Point z(n);
  for (auto& c : z) c = radius * random_cplx(rng);
  return z;
}

CTensor random_unitary(std::mt19937_64& rng, int p) {
  const CTensor m = random_ctensor(rng, p, p);
  Eigen::HouseholderQR<CTensor> qr(m);
  CTensor q = qr.householderQ();
  const CTensor r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < p; ++i) {
    const double mag = std::abs(r(i, i));
    if (mag > 0.0) q.col(i) *= r(i, i) / mag;
  }
  return q;
}

MultiPoly random_poly(std::mt19937_64& rng, int nvars, int max_degree, int terms) {
  const auto monos = monomials_up_to(nvars, max_degree);
  std::uniform_int_distribution<std::size_t> pick(0, monos.size() - 1);
  MultiPoly out(nvars);
  for (int t = 0; t < terms; ++t) {
    const Exponent& e = monos[pick(rng)];
    out.add_term(e, random_cplx(rng));
  }
  return out;
}

}  // namespace skoda
