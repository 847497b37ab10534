#include "vche/eigenbasis.hpp"

#include <cmath>
#include <stdexcept>

#include "vche/norms.hpp"

namespace vche {

namespace {

void check_axis(int i) {
  if (i != 1 && i != 2) {
    throw std::invalid_argument("component index must be 1 or 2");
  }
}

// Radial factor of v^G: g(s) = (1 - exp(-s/4)) / s with g(0) = 1/4.
// expm1 keeps the small-s cancellation exact to machine precision.
Real radial_factor(Real s) {
  if (s == 0.0) return 0.25;
  return -std::expm1(-s / 4.0) / s;
}

// Derivative g'(s); the rewrite (1 + s/4) expm1(-s/4) + s/4 avoids the
// leading-order cancellation (the result is -s^2/32 + O(s^3)).
Real radial_factor_prime(Real s) {
  if (s == 0.0) return -1.0 / 32.0;
  const Real num = (1.0 + s / 4.0) * std::expm1(-s / 4.0) + s / 4.0;
  return num / (s * s);
}

}  // namespace

ScalarField gaussian_G(const Grid& grid) {
  Eigen::ArrayXXd v = (-grid.radius_squared() / 4.0).exp() / (4.0 * M_PI);
  return ScalarField(grid, Frame::Scaled, std::move(v));
}

ScalarField hermite_F(const Grid& grid, int i) {
  check_axis(i);
  ScalarField G = gaussian_G(grid);
  Eigen::ArrayXXd v = -0.5 * grid.coord_array(i - 1) * G.values();
  return ScalarField(grid, Frame::Scaled, std::move(v));
}

ScalarField gamma_field(const Grid& grid, Real tau, Real alpha) {
  if (tau < 0.0 || alpha < 0.0) {
    throw std::invalid_argument("gamma_field: tau and alpha must be >= 0");
  }
  const Real c = alpha * alpha * std::exp(-tau);
  ScalarField G = gaussian_G(grid);
  Eigen::ArrayXXd lapG = (grid.radius_squared() / 4.0 - 1.0) * G.values();
  Eigen::ArrayXXd v = G.values() - c * lapG;
  return ScalarField(grid, Frame::Scaled, std::move(v));
}

ScalarField lambda_field(const Grid& grid, int i, Real tau, Real alpha) {
  check_axis(i);
  if (tau < 0.0 || alpha < 0.0) {
    throw std::invalid_argument("lambda_field: tau and alpha must be >= 0");
  }
  const Real c = alpha * alpha * std::exp(-tau);
  ScalarField G = gaussian_G(grid);
  const Eigen::ArrayXXd& xi = grid.coord_array(i - 1);
  Eigen::ArrayXXd F = -0.5 * xi * G.values();
  Eigen::ArrayXXd lapF =
      0.5 * xi * (2.0 - grid.radius_squared() / 4.0) * G.values();
  Eigen::ArrayXXd v = F - c * lapF;
  return ScalarField(grid, Frame::Scaled, std::move(v));
}

VectorField velocity_vG(const Grid& grid) {
  const int n = grid.n();
  const Eigen::ArrayXXd& x1 = grid.coord_array(0);
  const Eigen::ArrayXXd& x2 = grid.coord_array(1);
  const Eigen::ArrayXXd s = grid.radius_squared();
  Eigen::ArrayXXd gfac(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) gfac(i, j) = radial_factor(s(i, j));
  }
  gfac /= 2.0 * M_PI;
  return VectorField(ScalarField(grid, Frame::Scaled, -gfac * x2),
                     ScalarField(grid, Frame::Scaled, gfac * x1));
}

VectorField velocity_vF(const Grid& grid, int i) {
  check_axis(i);
  const int n = grid.n();
  const Eigen::ArrayXXd& x1 = grid.coord_array(0);
  const Eigen::ArrayXXd& x2 = grid.coord_array(1);
  const Eigen::ArrayXXd s = grid.radius_squared();
  Eigen::ArrayXXd gfac(n, n), gpfac(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      gfac(k, j) = radial_factor(s(k, j));
      gpfac(k, j) = radial_factor_prime(s(k, j));
    }
  }
  // d_i v^G = (1/2pi) [ g'(s) 2 xi_i (-xi_2, xi_1) + g(s) d_i(-xi_2, xi_1) ].
  const Eigen::ArrayXXd& xi = (i == 1) ? x1 : x2;
  Eigen::ArrayXXd u1 = 2.0 * gpfac * xi * (-x2);
  Eigen::ArrayXXd u2 = 2.0 * gpfac * xi * x1;
  if (i == 1) {
    u2 += gfac;
  } else {
    u1 -= gfac;
  }
  u1 /= 2.0 * M_PI;
  u2 /= 2.0 * M_PI;
  return VectorField(ScalarField(grid, Frame::Scaled, std::move(u1)),
                     ScalarField(grid, Frame::Scaled, std::move(u2)));
}

ScalarField oseen_vortex(const Grid& grid, Real t) {
  if (t < 0.0) {
    throw std::invalid_argument("oseen_vortex: t must be >= 0");
  }
  const Real s = 1.0 + t;
  Eigen::ArrayXXd v =
      (-grid.radius_squared() / (4.0 * s)).exp() / (4.0 * M_PI * s);
  return ScalarField(grid, Frame::Physical, std::move(v));
}

Projection project(const ScalarField& f, int m) {
  if (m != 2 && m != 3) {
    throw std::invalid_argument("project: m must be 2 or 3");
  }
  if (f.frame() != Frame::Scaled) {
    throw std::invalid_argument("project: field must be in the scaled frame");
  }
  const Grid& grid = f.grid();
  Moments mom = moments(f);
  EigenCoefficients c;
  c.m = m;
  c.a = mom.mass;
  ScalarField g(grid, Frame::Scaled,
                f.values() - c.a * gaussian_G(grid).values());
  if (m == 3) {
    // First moments of F_i are (-delta_i1, -delta_i2); cancel f's moments.
    c.b1 = -mom.m1;
    c.b2 = -mom.m2;
    g.values() -= c.b1 * hermite_F(grid, 1).values();
    g.values() -= c.b2 * hermite_F(grid, 2).values();
  }
  return Projection{c, std::move(g)};
}

}  // namespace vche
