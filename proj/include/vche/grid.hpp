// Uniform periodic collocation grid on the square [-H, H)^2.
#pragma once

#include <Eigen/Core>

namespace vche {

using Real = double;

// Coordinate frame a field lives in: unscaled x/t variables or
// self-similar xi/tau variables.
enum class Frame { Physical, Scaled };

// Square periodic grid: n points per axis (power of two, >= 16),
// spacing h = 2H/n, collocation points x_j = -H + j h.
// Wavenumbers are integer multiples of pi/H; the real-to-complex
// transform stores the nonnegative-k1 half spectrum, so the Nyquist
// mode appears exactly once per axis.
class Grid {
public:
  Grid(int n_points, Real half_width);

  int n() const { return n_; }
  Real half_width() const { return half_width_; }
  Real spacing() const { return spacing_; }

  // 1-D collocation coordinates, size n.
  const Eigen::ArrayXd& coords() const { return coords_; }
  // Nonnegative wavenumbers m*(pi/H), m = 0..n/2 (axis-1 half storage).
  const Eigen::ArrayXd& wavenumbers_half() const { return k_half_; }
  // Full-spectrum wavenumbers in transform order: 0..n/2, -(n/2-1)..-1.
  const Eigen::ArrayXd& wavenumbers_full() const { return k_full_; }

  // Largest retained integer mode under the 2/3 rule: floor(n/3).
  int dealias_limit() const { return n_ / 3; }

  // Coordinate of axis `axis` (0 or 1) broadcast to the (n, n) layout
  // values(i1, i2); axis 0 varies down columns, axis 1 across them.
  Eigen::ArrayXXd coord_array(int axis) const;
  // |xi|^2 on the grid.
  Eigen::ArrayXXd radius_squared() const;
  // k1^2 + k2^2 in half-spectrum layout (n/2+1, n).
  Eigen::ArrayXXd ksq_array() const;

  bool operator==(const Grid& o) const {
    return n_ == o.n_ && half_width_ == o.half_width_;
  }
  bool operator!=(const Grid& o) const { return !(*this == o); }

private:
  int n_;
  Real half_width_;
  Real spacing_;
  Eigen::ArrayXd coords_;
  Eigen::ArrayXd k_half_;
  Eigen::ArrayXd k_full_;
};

// Validating factory; throws std::invalid_argument on a non-power-of-two
// n, n < 16, or nonpositive half width.
Grid make_grid(int n_points, Real half_width);

}  // namespace vche
