#include "skoda/poly.hpp"

#include <algorithm>
#include <string>

#include "skoda/errors.hpp"

namespace skoda {

MultiPoly::MultiPoly(int nvars) : nvars_(nvars) {
  if (nvars < 1) throw DomainError("MultiPoly: nvars must be >= 1");
}

MultiPoly MultiPoly::constant(int nvars, cplx c) {
  MultiPoly p(nvars);
  p.add_term(Exponent(nvars, 0), c);
  return p;
}

MultiPoly MultiPoly::variable(int nvars, int axis) {
  if (axis < 0 || axis >= nvars) throw DomainError("MultiPoly::variable: axis out of range");
  Exponent e(nvars, 0);
  e[axis] = 1;
  return monomial(nvars, e);
}

MultiPoly MultiPoly::monomial(int nvars, const Exponent& exps, cplx c) {
  MultiPoly p(nvars);
  p.add_term(exps, c);
  return p;
}

int MultiPoly::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int x : e) s += x;
    d = std::max(d, s);
  }
  return d;
}

cplx MultiPoly::coeff(const Exponent& exps) const {
  auto it = terms_.find(exps);
  return it == terms_.end() ? cplx(0.0) : it->second;
}

double MultiPoly::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

void MultiPoly::add_term(const Exponent& exps, cplx c) {
  if (static_cast<int>(exps.size()) != nvars_) {
    throw ShapeError("MultiPoly: exponent has " + std::to_string(exps.size()) +
                     " entries, expected " + std::to_string(nvars_));
  }
  for (int x : exps) {
    if (x < 0) throw DomainError("MultiPoly: negative exponent");
  }
  if (c == cplx(0.0)) return;
  auto [it, inserted] = terms_.emplace(exps, c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx(0.0)) terms_.erase(it);
  }
}

cplx MultiPoly::eval(std::span<const cplx> z) const {
  if (static_cast<int>(z.size()) != nvars_) throw ShapeError("MultiPoly::eval: point dimension mismatch");
  if (terms_.empty()) return 0.0;
  // powers[v][e] = z_v^e, built once per call
  const int deg = degree();
  std::vector<std::vector<cplx>> powers(nvars_, std::vector<cplx>(deg + 1, 1.0));
  for (int v = 0; v < nvars_; ++v) {
    for (int e = 1; e <= deg; ++e) powers[v][e] = powers[v][e - 1] * z[v];
  }
  cplx sum = 0.0;
  for (const auto& [e, c] : terms_) {
    cplx m = c;
    for (int v = 0; v < nvars_; ++v) m *= powers[v][e[v]];
    sum += m;
  }
  return sum;
}

MultiPoly MultiPoly::partial(int axis) const {
  if (axis < 0 || axis >= nvars_) {
    throw DomainError("MultiPoly::partial: axis " + std::to_string(axis) + " out of range [0, " +
                      std::to_string(nvars_) + ")");
  }
  MultiPoly out(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[axis] == 0) continue;
    Exponent d = e;
    d[axis] -= 1;
    out.add_term(d, c * static_cast<double>(e[axis]));
  }
  return out;
}

MultiPoly MultiPoly::pruned(double tol) const {
  MultiPoly out(nvars_);
  for (const auto& [e, c] : terms_) {
    if (std::abs(c) > tol) out.terms_.emplace(e, c);
  }
  return out;
}

void MultiPoly::require_same_nvars(const MultiPoly& other) const {
  if (other.nvars_ != nvars_) throw ShapeError("MultiPoly: variable count mismatch");
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& other) {
  require_same_nvars(other);
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& other) {
  require_same_nvars(other);
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

MultiPoly& MultiPoly::operator*=(cplx s) {
  if (s == cplx(0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  a.require_same_nvars(b);
  MultiPoly out(a.nvars_);
  Exponent e(a.nvars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (int v = 0; v < a.nvars_; ++v) e[v] = ea[v] + eb[v];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

std::vector<Exponent> monomials_up_to(int nvars, int degree) {
  std::vector<Exponent> out;
  Exponent e(nvars, 0);
  // enumerate each total degree t, lexicographically descending in the first variable
  for (int t = 0; t <= degree; ++t) {
    auto rec = [&](auto&& self, int v, int remaining) -> void {
      if (v == nvars - 1) {
        e[v] = remaining;
        out.push_back(e);
        return;
      }
      for (int x = remaining; x >= 0; --x) {
        e[v] = x;
        self(self, v + 1, remaining - x);
      }
    };
    rec(rec, 0, t);
  }
  return out;
}

BiPoly::BiPoly(MultiPoly a, MultiPoly b) {
  if (a.nvars() != b.nvars()) throw ShapeError("BiPoly: variable count mismatch");
  if (!a.is_zero() && !b.is_zero()) terms_.emplace_back(std::move(a), std::move(b));
}

cplx BiPoly::eval(std::span<const cplx> z) const {
  cplx sum = 0.0;
  for (const auto& [a, b] : terms_) sum += a.eval(z) * std::conj(b.eval(z));
  return sum;
}

BiPoly BiPoly::d_holo(int axis) const {
  BiPoly out;
  for (const auto& [a, b] : terms_) out += BiPoly(a.partial(axis), b);
  return out;
}

BiPoly BiPoly::d_antiholo(int axis) const {
  BiPoly out;
  for (const auto& [a, b] : terms_) out += BiPoly(a, b.partial(axis));
  return out;
}

BiPoly& BiPoly::operator+=(const BiPoly& other) {
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  return *this;
}

}  // namespace skoda
