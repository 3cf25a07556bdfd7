#pragma once

#include "phimix/mid_laws.hpp"
#include "phimix/mixing_laws.hpp"
#include "phimix/stats_verify.hpp"

// Negative fixtures: inputs the numerical witnesses must reject.
namespace phimix::fixtures {

/// phi(s) = 0.5 + 0.5 exp(-s): a genuine Laplace transform (Z is 0 or 1 with
/// equal odds) that is not self-decomposable.
MixingLaw bernoulli_scaled_lt();

/// sin(t) / t, the CF of uniform(-1, 1); has real zeros, so it is not ID.
CfFunction uniform_cf();

/// Equal mixture of uniform[0,1]^2 shifted to (0, 1) and to (1, 0). A valid
/// d.f. whose positivity set is L-shaped and whose square root puts mass
/// 1 - 2 sqrt(0.5) < 0 on the cell [1, 2]^2, so it is not max-infinitely
/// divisible.
DfFunction shifted_uniform_mixture();

/// Product-Frechet(1, 1) tabulated on a 7x7 log grid over [0.2, 20] with the
/// block x_1 >= 1.5, x_2 < 1 forced to zero: L-shaped positivity set and
/// non-monotone in x_1.
TabulatedDf l_shaped_table();

}  // namespace phimix::fixtures
