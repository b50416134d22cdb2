#include "skoda/psh_weight.hpp"

#include <cmath>

#include "skoda/errors.hpp"

namespace skoda {

PshWeight::PshWeight(int nvars, double c0, double c1, std::vector<LogTerm> logs)
    : nvars_(nvars), c0_(c0), c1_(c1), logs_(std::move(logs)) {
  if (nvars < 1) throw DomainError("PshWeight: nvars must be >= 1");
  if (!std::isfinite(c0)) throw DomainError("PshWeight: c0 must be finite");
  if (!(c1 >= 0.0)) throw DomainError("PshWeight: c1 must be >= 0");
  for (const auto& t : logs_) {
    if (!(t.kappa >= 0.0)) throw DomainError("PshWeight: kappa must be >= 0");
    if (!(t.eps > 0.0)) throw DomainError("PshWeight: eps must be > 0");
    if (t.poly.nvars() != nvars) throw DomainError("PshWeight: log polynomial has the wrong number of variables");
    std::vector<MultiPoly> d;
    for (int l = 0; l < nvars; ++l) d.push_back(t.poly.partial(l));
    dlogs_.push_back(std::move(d));
  }
}

double PshWeight::value(const Point& z) const {
  double v = c0_;
  if (c1_ != 0.0) {
    double r2 = 0.0;
    for (const auto& zi : z) r2 += std::norm(zi);
    v += c1_ * r2;
  }
  for (const auto& t : logs_) v += t.kappa * std::log(t.eps + std::norm(t.poly.eval(z)));
  return v;
}

HermitianForm PshWeight::hessian(const Point& z) const {
  Eigen::MatrixXcd h = c1_ * Eigen::MatrixXcd::Identity(nvars_, nvars_);
  for (std::size_t i = 0; i < logs_.size(); ++i) {
    const auto& t = logs_[i];
    const double denom = t.eps + std::norm(t.poly.eval(z));
    CVector grad(nvars_);
    for (int l = 0; l < nvars_; ++l) grad(l) = dlogs_[i][l].eval(z);
    // d_l dbar_v log(eps + |p|^2) = eps d_l p conj(d_v p) / (eps + |p|^2)^2
    h += (t.kappa * t.eps / (denom * denom)) * (grad * grad.adjoint());
  }
  return HermitianForm(h);
}

}  // namespace skoda
