// Lattice-sum L^p norms, polynomially weighted L^2(m) norms, and low-order
// moments.
#pragma once

#include <limits>

#include "vche/field.hpp"

namespace vche {

constexpr Real kPInf = std::numeric_limits<Real>::infinity();

// (h^2 sum |f|^p)^{1/p}; p = kPInf gives max|f|. Throws for p < 1.
Real lp_norm(const ScalarField& f, Real p);

// L^2(m) norm with weight b^m, b = (1 + |xi|^2)^{1/2}:
// sqrt(h^2 sum (1+|xi|^2)^m f^2). m = 0 evaluates the identical
// arithmetic as lp_norm(f, 2). Requires a scaled-frame field and m >= 0.
Real weighted_norm(const ScalarField& f, int m);

struct Moments {
  Real mass;  // integral of f
  Real m1;    // integral of xi_1 f
  Real m2;    // integral of xi_2 f
};

// Mass and first moments by lattice quadrature.
Moments moments(const ScalarField& f);

}  // namespace vche
