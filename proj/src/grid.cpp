#include "vche/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace vche {

namespace {
bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

Grid::Grid(int n_points, Real half_width)
    : n_(n_points), half_width_(half_width) {
  if (!is_power_of_two(n_points) || n_points < 16) {
    throw std::invalid_argument(
        "Grid: n must be a power of two >= 16, got " +
        std::to_string(n_points));
  }
  if (!(half_width > Real(0))) {
    throw std::invalid_argument("Grid: half width must be positive");
  }
  spacing_ = Real(2) * half_width_ / Real(n_);

  coords_.resize(n_);
  for (int j = 0; j < n_; ++j) coords_[j] = -half_width_ + spacing_ * j;

  const Real dk = M_PI / half_width_;
  k_half_.resize(n_ / 2 + 1);
  for (int m = 0; m <= n_ / 2; ++m) k_half_[m] = dk * m;

  k_full_.resize(n_);
  for (int m = 0; m < n_; ++m) {
    const int signed_m = (m <= n_ / 2) ? m : m - n_;
    k_full_[m] = dk * signed_m;
  }
}

Eigen::ArrayXXd Grid::coord_array(int axis) const {
  if (axis == 0) return coords_.replicate(1, n_);
  return coords_.transpose().replicate(n_, 1);
}

Eigen::ArrayXXd Grid::radius_squared() const {
  return coord_array(0).square() + coord_array(1).square();
}

Eigen::ArrayXXd Grid::ksq_array() const {
  return k_half_.square().replicate(1, n_) +
         k_full_.square().transpose().replicate(n_ / 2 + 1, 1);
}

Grid make_grid(int n_points, Real half_width) {
  return Grid(n_points, half_width);
}

}  // namespace vche
