// Maps between the physical frame (x, t) and the self-similar scaled frame
// (xi, tau): xi = x / sqrt(1+t), tau = ln(1+t), w = (1+t) v.
#pragma once

#include <utility>

#include "vche/field.hpp"

namespace vche {

// Evaluates the Fourier series of `src` at the dilated points
// lambda * (target collocation points). Target points mapped inside the
// source box are evaluated exactly (band-limited interpolation); points
// mapped outside are zero-filled, which fabricates nothing as long as
// the source field meets the boundary-decay precondition — if its edge
// tail exceeds 1e-9 of its peak the call throws instead.
ScalarField resample_dilate(const ScalarField& src, Real lambda,
                            const Grid& target, Frame target_frame);

// w(xi) = (1+t) v(sqrt(1+t) xi); returns (w, tau). v must be physical.
std::pair<ScalarField, Real> to_scaled(const ScalarField& v, Real t,
                                       const Grid& target);

// v(x) = w(x / sqrt(1+t)) / (1+t) with t = e^tau - 1; returns (v, t).
// w must be scaled.
std::pair<ScalarField, Real> from_scaled(const ScalarField& w, Real tau,
                                         const Grid& target);

}  // namespace vche
