#pragma once

// Seeded generators for randomized checks. Only raw mt19937_64 output is
// used so that reports are reproducible across standard libraries.

#include <cstdint>
#include <random>

#include "tractorlab/poly.hpp"

namespace tractorlab {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [lo, hi].
  int uniform(int lo, int hi);
  bool coin() { return (next() >> 63) != 0; }
  /// Small nonzero rational p/q with |p| <= bound, 1 <= q <= bound.
  Rational small_rational(int bound);

 private:
  std::mt19937_64 engine_;
};

/// Up to max_terms terms of total degree <= max_degree with integer
/// coefficients in [-coef_bound, coef_bound].
Poly random_poly(Rng& rng, int nvars, int max_degree, int max_terms, int coef_bound = 5);

}  // namespace tractorlab
