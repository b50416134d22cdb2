#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "skoda/generators.hpp"
#include "skoda/psh_weight.hpp"

namespace skoda {

/// Tally of one property over a randomized family. Each instance yields a
/// normalized deviation; it fails when the deviation exceeds the tolerance
/// or the instance raised an error.
struct SweepResult {
  std::string name;
  double tolerance = 0.0;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::size_t errors = 0;
  double worst = 0.0;
  std::string first_failure;

  std::vector<double> deviations;  ///< per instance, in index order
  std::vector<std::string> details;

  bool pass() const noexcept { return checks > 0 && failures == 0; }
  /// Recounts failures against a different tolerance.
  void retally(double tol);
};

struct SweepSpec {
  std::size_t count = 1000;
  std::uint64_t seed = 20240611;
  int max_n = 3;
  int max_p = 3;
  int max_degree = 3;
};

/// Random generator system with n variables, p generators and degrees in
/// [1, max_degree]; never identically zero.
GeneratorSystem random_system(std::mt19937_64& rng, int n, int p, int max_degree);
/// psi = c0 + c1 |z|^2 + kappa log(eps + |p|^2) with random admissible parameters.
PshWeight random_psh(std::mt19937_64& rng, int n);

/// Tensor inequality over all shapes 1 <= r <= max_r, 1 <= n <= max_n (cycled),
/// slack >= -1e-12 (1 + factor rhs); plus the identity pattern attaining
/// min(r, n) to 1e-9.
std::vector<SweepResult> cs_sweep(std::size_t count, std::uint64_t seed, int max_r = 6, int max_n = 6);

/// Direct wedge quantities against the reduced tensor quantities (1e-12
/// relative) and the skew-symmetrization identity (1e-12 relative).
std::vector<SweepResult> wedge_sweep(std::size_t count, std::uint64_t seed, int max_p = 5, int max_n = 4);

/// Frame-route vs closed-form kernel curvature (1e-9 relative) and
/// nonpositivity (<= 1e-12).
std::vector<SweepResult> curvature_sweep(const SweepSpec& spec);

/// lambda_min of the twisted domination form >= -1e-8 (1 + max |entry|) for
/// gamma in {q, q + 0.5, q + 1}.
std::vector<SweepResult> domination_sweep(const SweepSpec& spec);

/// Max-entry relative residual of the fiber-trace identity <= 1e-10.
std::vector<SweepResult> identity54_sweep(const SweepSpec& spec);

/// lambda_min of both weight-variant difference forms >= -1e-10 scale;
/// variant c samples are rescaled so that |g| < 1.
std::vector<SweepResult> variants_sweep(const SweepSpec& spec);

}  // namespace skoda
