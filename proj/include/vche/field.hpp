// Scalar and vector fields on a Grid with a lazily cached spectral
// representation.
#pragma once

#include <Eigen/Core>

#include "vche/grid.hpp"

namespace vche {

// Real scalar field sampled at the collocation points. values()(i1, i2)
// is the sample at (coords[i1], coords[i2]). The spectral representation
// is the unnormalized real-to-complex transform, shape (n/2+1, n):
// spec()(m1, m2) = sum_j f(x_j) exp(-2 pi i (j1 m1 + j2 m2) / n).
// True coefficients of the exp(i k . xi) series on the centered box are
// spec * (-1)^{m1+m2} / n^2; pure k-multipliers never need the phase.
//
// The cache is computed on first use and invalidated by non-const value
// access. Concurrent readers of a field whose cache is already built are
// fine; the caller serializes any mutation (including a first spec()
// call) with other access to the same field.
class ScalarField {
public:
  ScalarField(Grid grid, Frame frame);
  ScalarField(Grid grid, Frame frame, Eigen::ArrayXXd values);

  const Grid& grid() const { return grid_; }
  Frame frame() const { return frame_; }

  const Eigen::ArrayXXd& values() const { return values_; }
  Eigen::ArrayXXd& values() {
    spec_valid_ = false;
    return values_;
  }

  // Cached spectral coefficients (see class comment for conventions).
  const Eigen::ArrayXXcd& spec() const;
  // Replace the spectral representation; values are re-synthesized.
  void set_spec(const Eigen::ArrayXXcd& raw);

private:
  Grid grid_;
  Frame frame_;
  Eigen::ArrayXXd values_;
  mutable Eigen::ArrayXXcd spec_;
  mutable bool spec_valid_ = false;
};

// Two-component vector field (velocity); both components share one grid.
struct VectorField {
  ScalarField c1;
  ScalarField c2;

  VectorField(Grid grid, Frame frame)
      : c1(grid, frame), c2(std::move(grid), frame) {}
  VectorField(ScalarField a, ScalarField b)
      : c1(std::move(a)), c2(std::move(b)) {}

  const Grid& grid() const { return c1.grid(); }
  Frame frame() const { return c1.frame(); }
};

}  // namespace vche
