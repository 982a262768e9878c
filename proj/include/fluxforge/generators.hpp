#pragma once

#include <cstdint>

#include "fluxforge/field.hpp"

namespace fluxforge {

/// Shift charge positions 1e-9 off quadrature nodes so the analytic kernels
/// are never evaluated at their poles.
ChargeSet nudged(const ChargeSet& charges, int dim);

/// Superposition of fundamental-solution gradients,
///   V(x) = sum_j d_j (x - x_j) / (n alpha(n) |x - x_j|^n),
/// whose distributional divergence is sum_j d_j delta_{x_j}. n in {2,3}.
VectorField gen_vortex(const ChargeSet& charges, int n, int N);

/// The S^1-valued product map u(z) = prod_j ((z-a_j)/|z-a_j|)^{s_j} and its
/// current (1/2pi) u ^ grad^perp u, evaluated via the product rule. n = 2,
/// degrees must be +-1.
VectorField gen_circle_map_current(const ChargeSet& charges, int N);

/// Exactly divergence-free field from a seeded random antisymmetric
/// potential: V_i = sum_j d_j A_ij with A quadratic plus a small smooth
/// ripple. n = 1 returns a constant. Deterministic in the seed.
VectorField gen_divfree(std::uint64_t seed, int n, int N);

}  // namespace fluxforge
