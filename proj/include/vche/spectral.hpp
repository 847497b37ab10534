// Fourier transforms, spectral derivatives, dealiasing, and lattice-sum
// quadrature on the periodic grid.
#pragma once

#include <Eigen/Core>

#include "vche/field.hpp"
#include "vche/grid.hpp"

namespace vche {

// Unnormalized real-to-complex transform, output (n/2+1, n).
Eigen::ArrayXXcd fft_forward(const Grid& grid, const Eigen::ArrayXXd& values);
// Inverse of fft_forward including the 1/n^2 normalization.
Eigen::ArrayXXd fft_inverse(const Grid& grid, const Eigen::ArrayXXcd& raw);

// d/dx_axis via the ik multiplier; the Nyquist mode is zeroed (it has no
// consistent odd-derivative representation).
ScalarField gradient_component(const ScalarField& f, int axis);
VectorField gradient(const ScalarField& f);
ScalarField laplacian(const ScalarField& f);

// Raw-spectrum form of gradient_component for callers that stage several
// multiplier passes without materializing intermediate fields.
Eigen::ArrayXXcd gradient_spec(const Grid& grid, const Eigen::ArrayXXcd& raw,
                               int axis);

// d1 u1 + d2 u2 and the planar scalar curl d1 u2 - d2 u1.
ScalarField divergence(const VectorField& u);
ScalarField curl(const VectorField& u);

// 2/3-rule dealias: zero every mode with |m1| or |m2| above floor(n/3).
// Idempotent.
ScalarField dealias(const ScalarField& f);
void dealias_spec(const Grid& grid, Eigen::ArrayXXcd& raw);

// Lattice-sum quadrature h^2 sum f: spectrally accurate for fields that
// decay below roundoff at the box edge.
Real integrate(const ScalarField& f);

// max |f| on the outermost grid ring relative to max |f| overall; the
// boundary-decay precondition asks this to be below ~1e-12. Callers that
// produce reports record a warning instead of failing.
Real boundary_tail_ratio(const ScalarField& f);

// Parseval energy h^2 sum f^2 evaluated from the half spectrum (Nyquist
// and k1=0 columns counted once, the interior twice).
Real spectral_energy(const Grid& grid, const Eigen::ArrayXXcd& raw);

}  // namespace vche
