#include "vche/norms.hpp"

#include <cmath>
#include <stdexcept>

#include "vche/spectral.hpp"

namespace vche {

Real lp_norm(const ScalarField& f, Real p) {
  if (p == kPInf) return f.values().abs().maxCoeff();
  if (!(p >= Real(1))) {
    throw std::invalid_argument("lp_norm: p must be >= 1 or infinity");
  }
  const Real h = f.grid().spacing();
  if (p == Real(2)) {
    return std::sqrt(h * h * f.values().square().sum());
  }
  const Real sum = f.values().abs().pow(p).sum();
  return std::pow(h * h * sum, Real(1) / p);
}

Real weighted_norm(const ScalarField& f, int m) {
  if (m < 0) throw std::invalid_argument("weighted_norm: m must be >= 0");
  if (f.frame() != Frame::Scaled) {
    throw std::invalid_argument("weighted_norm: field must be in scaled frame");
  }
  const Real h = f.grid().spacing();
  if (m == 0) {
    return std::sqrt(h * h * f.values().square().sum());
  }
  const Eigen::ArrayXXd weight =
      (Eigen::ArrayXXd::Ones(f.grid().n(), f.grid().n()) +
       f.grid().radius_squared())
          .pow(m);
  return std::sqrt(h * h * (weight * f.values().square()).sum());
}

Moments moments(const ScalarField& f) {
  const Real h = f.grid().spacing();
  const Real w = h * h;
  Moments out;
  out.mass = w * f.values().sum();
  out.m1 = w * (f.grid().coord_array(0) * f.values()).sum();
  out.m2 = w * (f.grid().coord_array(1) * f.values()).sum();
  return out;
}

}  // namespace vche
