#pragma once

/// Fixed-order Gauss-Legendre rules used by the mild-solution solver and the
/// Duhamel integrals in the invariant-manifold verification.  Only the orders
/// actually consumed (8 and 16, the latter for doubled-node error checks) are
/// provided; nodes and weights are tabulated to full double precision and
/// validated by the quadrature tests against exact polynomial integrals.

#include <utility>
#include <vector>

#include "vche/field.hpp"

namespace vche {

/// Nodes and weights of the N-point Gauss-Legendre rule on [-1, 1].
/// Supported N: 8, 16.  Throws std::invalid_argument otherwise.
std::vector<std::pair<Real, Real>> gauss_legendre(int points);

/// Same rule affinely mapped to [a, b] (weights scaled by (b-a)/2).
std::vector<std::pair<Real, Real>> gauss_legendre(int points, Real a, Real b);

} // namespace vche
