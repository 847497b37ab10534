// Integral and differential operators of the model: Biot-Savart inversion,
// the Helmholtz smoothing filter (fixed and time-dependent coefficient),
// the heat semigroup, and the exact semigroup of the drift-diffusion
// generator L = Laplacian + (xi/2).grad + 1 in self-similar variables.
#pragma once

#include "vche/field.hpp"
#include "vche/grid.hpp"

namespace vche {

// Helmholtz filter parameters. The filter inverts (I - c Laplacian) with
// c = effective_coefficient: alpha^2 for a physical-frame field, and
// alpha^2 e^{-tau} for a scaled-frame field at logarithmic time tau.
struct FilterParams {
  Real alpha = 0.0;
  Real effective_coefficient = 0.0;
};

// effective_coefficient = alpha^2.
FilterParams make_physical_filter(Real alpha);
// effective_coefficient = alpha^2 e^{-tau}.
FilterParams make_scaled_filter(Real alpha, Real tau);

// Time argument of the L-semigroup with the diffusion scale
// a(tau) = 1 - e^{-tau} cached (computed via expm1, exact near 0).
struct SemigroupTime {
  Real tau = 0.0;
  Real a_of_tau = 0.0;

  SemigroupTime() = default;
  explicit SemigroupTime(Real tau_in);
};

// Velocity from vorticity: u_hat(k) = i (k2, -k1) w_hat(k) / |k|^2 for
// k != 0; the k = 0 mode (box mean) is projected out, and the Nyquist
// modes are zeroed like every odd-order multiplier. The output is exactly
// divergence-free and its curl recovers w minus its mean. If removed_mean
// is non-null it receives the mean that was projected out (callers that
// produce reports surface it when it exceeds 1e-14).
//
// This is the inversion on the periodic box: for vorticity carrying net
// mass it differs from the whole-plane velocity by a rigid rotation of
// angular rate mean/2 plus a boundary-layer correction, so closed-form
// comparisons either use mean-free vorticity or compensate the rotation.
VectorField biot_savart(const ScalarField& w, Real* removed_mean = nullptr);

// Raw-spectrum form of biot_savart for callers that stage several spectral
// passes without materializing intermediate fields.
void biot_savart_spec(const Grid& grid, const Eigen::ArrayXXcd& w_raw,
                      Eigen::ArrayXXcd& u1_raw, Eigen::ArrayXXcd& u2_raw);

// Exact grid inverse of (I - c Laplacian): spectral multiplier
// 1/(1 + c |k|^2), applied componentwise for vector fields.
ScalarField helmholtz_filter(const ScalarField& v, const FilterParams& fp);
VectorField helmholtz_filter(const VectorField& v, const FilterParams& fp);

// Velocity induced by unfiltered vorticity w: Biot-Savart of the filtered
// vorticity. The mass and first moments are routed through closed-form
// pairs (Gaussian profile and its two first derivatives, each with its
// exact whole-plane velocity) so the periodic inversion only ever sees a
// mean- and moment-free remainder; without the split the output would
// pick up the spurious rigid rotation described above, which both shifts
// the velocity field and slowly rotates first moments during evolution.
VectorField filtered_velocity(const ScalarField& w, const FilterParams& fp);

// Heat semigroup e^{t Laplacian}: multiplier e^{-|k|^2 t}. Rejects t < 0.
ScalarField heat_semigroup(const ScalarField& f, Real t);

// The generator L f = Laplacian f + (xi/2).grad f + f, with the drift term
// evaluated in physical space (coordinate times spectral gradient).
ScalarField apply_L(const ScalarField& f);

// Exact semigroup of L = Laplacian + (xi/2).grad + 1. In Fourier variables
// the flow contracts wavenumbers and applies a heat factor:
//   out_hat(k) = e^{-a(tau) |k|^2} f_hat(e^{-tau/2} k),
// where f_hat is the trigonometric interpolant's transform evaluated at
// the (off-grid) contracted wavenumbers by a dense separable sum. This is
// the transform of "flow the unscaled heat equation for time e^tau - 1,
// then rescale", but the contraction keeps every evaluation inside the
// resolved spectral box for all tau >= 0, so no information is lost for
// fields that decay at the box edge. Output Nyquist modes are zeroed.
// Rejects tau < 0.
ScalarField semigroup_L(const ScalarField& f, const SemigroupTime& st);

}  // namespace vche
