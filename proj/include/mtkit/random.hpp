#pragma once

#include <cstdint>
#include <random>

#include "mtkit/level.hpp"

namespace mtk {

/// All seeded randomness in the project goes through this engine so that a
/// given seed reproduces the same samples.
using Rng = std::mt19937_64;

double standard_normal(Rng& rng);
cplx complex_normal(Rng& rng);  // unit variance, independent real and imaginary parts
int uniform_int(Rng& rng, int lo, int hi);  // inclusive
double uniform_real(Rng& rng, double lo, double hi);

/// Random trigonometric polynomial with frequencies in [-bandwidth, bandwidth]
/// (only [0, bandwidth] when analytic).
GridFunction random_bandlimited(CircleGrid grid, int bandwidth, Rng& rng, bool analytic = false);

/// sum_{k=0}^{degree} c_k e^{ik theta} with unit-variance complex normal c_k.
GridFunction random_analytic_polynomial(CircleGrid grid, int degree, Rng& rng);

/// Independent real normal samples.
GridFunction random_real(CircleGrid grid, Rng& rng);

/// Piecewise constant levels in [lo, hi] with up to `pieces` random breakpoints.
LevelFunction random_step_levels(CircleGrid grid, int lo, int hi, int pieces, Rng& rng);

/// Independent uniform level per grid point in [lo, hi].
LevelFunction random_levels(CircleGrid grid, int lo, int hi, Rng& rng);

}  // namespace mtk
