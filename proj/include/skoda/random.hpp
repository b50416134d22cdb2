#pragma once

#include <cstdint>
#include <random>

#include "skoda/types.hpp"

namespace skoda {

class MultiPoly;

/// Independent, reproducible stream for instance `index` of a sweep seeded by
/// `seed`. Instances can be generated in any order or in parallel.
std::mt19937_64 instance_rng(std::uint64_t seed, std::uint64_t index);

/// Entries uniform in the centred complex square [-1,1] x [-1,1].
cplx random_cplx(std::mt19937_64& rng);
CTensor random_ctensor(std::mt19937_64& rng, int rows, int cols);
CVector random_cvector(std::mt19937_64& rng, int n);
Point random_point(std::mt19937_64& rng, int n, double radius = 1.0);

/// Haar-ish random unitary (QR of a random complex matrix with phase fix).
CTensor random_unitary(std::mt19937_64& rng, int p);

/// Polynomial in `nvars` variables with `terms` random monomials of total
/// degree <= max_degree and random coefficients.
MultiPoly random_poly(std::mt19937_64& rng, int nvars, int max_degree, int terms);

}  // namespace skoda
