// Closed-form special fields of the self-similar analysis — the Gaussian
// vortex profile G, its first derivatives F_i, their filtered companions
// Gamma and Lambda_i, the associated velocity fields, and the spreading
// vortex — plus the finite-dimensional moment projection used to split a
// field into its slow modes and a moment-free remainder.
#pragma once

#include "vche/field.hpp"
#include "vche/grid.hpp"

namespace vche {

// G(xi) = exp(-|xi|^2/4) / (4 pi): unit-mass Gaussian, the fixed point of
// the rescaled heat flow. Scaled frame.
ScalarField gaussian_G(const Grid& grid);

// F_i = d_i G = -(xi_i/2) G, i in {1, 2}. Scaled frame.
ScalarField hermite_F(const Grid& grid, int i);

// Gamma = G - alpha^2 e^{-tau} (Laplacian G), with the Laplacian in closed
// form (|xi|^2/4 - 1) G.
ScalarField gamma_field(const Grid& grid, Real tau, Real alpha);

// Lambda_i = F_i - alpha^2 e^{-tau} (Laplacian F_i), with
// Laplacian F_i = (xi_i/2)(2 - |xi|^2/4) G in closed form.
ScalarField lambda_field(const Grid& grid, int i, Real tau, Real alpha);

// Velocity of the Gaussian vortex:
// v^G(xi) = (1/2pi) (1 - exp(-|xi|^2/4)) / |xi|^2 * (-xi_2, xi_1),
// with the removable singularity at 0 evaluated exactly (limit 1/4 for the
// radial factor). Scaled frame.
VectorField velocity_vG(const Grid& grid);

// Velocity associated with F_i, the xi_i-derivative of v^G, in closed form.
VectorField velocity_vF(const Grid& grid, int i);

// The spreading vortex Omega(x, t) = exp(-|x|^2/(4(1+t))) / (4 pi (1+t)).
// Physical frame; equals the heat evolution of Omega(., 0) = G's profile.
ScalarField oseen_vortex(const Grid& grid, Real t);

// Coefficients of a field on the slow modes {G} (m = 2) or {G, F_1, F_2}
// (m = 3). b1 = b2 = 0 whenever m = 2.
struct EigenCoefficients {
  Real a = 0.0;
  Real b1 = 0.0;
  Real b2 = 0.0;
  int m = 2;
};

struct Projection {
  EigenCoefficients coeffs;
  ScalarField g;
};

// Moment projection. m = 2: a = mass, g = f - aG. m = 3: additionally the
// F_i coefficients are chosen so that g has vanishing first moments; since
// the first moments of F_i are (-delta_i1, -delta_i2), the coefficient of
// F_i is minus the corresponding moment of f.
Projection project(const ScalarField& f, int m);

}  // namespace vche
