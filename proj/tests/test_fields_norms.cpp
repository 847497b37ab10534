// Norms against closed forms and an independent radial-quadrature oracle,
// moment identities, embedding/monotonicity properties, and the
// physical/scaled frame maps.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "vche/norms.hpp"
#include "vche/scaling.hpp"
#include "vche/spectral.hpp"
#include "test_support.hpp"

using namespace vche;
using vche::testing::random_localized;

namespace {

ScalarField gauss_field(const Grid& g, Frame frame = Frame::Scaled) {
  Eigen::ArrayXXd v = (-g.radius_squared() / 4.0).exp() / (4.0 * M_PI);
  return ScalarField(g, frame, std::move(v));
}

// Independent 1-D radial oracle for norms of radial fields:
// integral over the plane of fn(r) = 2 pi * int_0^inf fn(r) r dr,
// by composite Simpson on a fine mesh.
double radial_integral(const std::function<double(double)>& fn, double rmax,
                       int intervals) {
  double acc = 0.0;
  const double dr = rmax / intervals;
  for (int i = 0; i < intervals; ++i) {
    const double a = i * dr, b = a + dr, m = 0.5 * (a + b);
    acc += (dr / 6.0) * (fn(a) * a + 4.0 * fn(m) * m + fn(b) * b);
  }
  return 2.0 * M_PI * acc;
}

double gauss_r(double r) {
  return std::exp(-r * r / 4.0) / (4.0 * M_PI);
}

}  // namespace

TEST_CASE("lp_norm closed forms for the Gaussian") {
  Grid g = make_grid(256, 12.0);
  ScalarField G = gauss_field(g);
  CHECK(lp_norm(G, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(lp_norm(G, kPInf) == doctest::Approx(1.0 / (4.0 * M_PI)).epsilon(1e-12));
  // |G|_2 via the p^(n/2) closed form for Gaussian powers: the unit-time
  // heat kernel in the plane has |Phi|_p^p = 1/(p (4 pi)^{p-1}).
  CHECK(lp_norm(G, 2.0) ==
        doctest::Approx(std::sqrt(1.0 / (2.0 * 4.0 * M_PI))).epsilon(1e-10));
  CHECK_THROWS_AS(lp_norm(G, 0.5), std::invalid_argument);
}

TEST_CASE("weighted_norm: m=0 equals lp_norm(.,2) exactly") {
  Grid g = make_grid(64, 10.0);
  for (unsigned seed = 0; seed < 10; ++seed) {
    ScalarField f = random_localized(g, seed);
    CHECK(weighted_norm(f, 0) == lp_norm(f, 2.0));
  }
}

TEST_CASE("weighted_norm of G against radial-quadrature oracle") {
  Grid g = make_grid(256, 12.0);
  ScalarField G = gauss_field(g);

  CHECK(weighted_norm(G, 0) ==
        doctest::Approx(1.0 / std::sqrt(8.0 * M_PI)).epsilon(1e-8));

  // Oracle first: ||G||_2^2 = int (1+r^2)^2 G^2.
  const double oracle = radial_integral(
      [](double r) {
        const double b2 = 1.0 + r * r;
        const double v = gauss_r(r);
        return b2 * b2 * v * v;
      },
      40.0, 4000);
  // Frozen closed form 13/(8 pi), which the oracle reproduces.
  CHECK(oracle == doctest::Approx(13.0 / (8.0 * M_PI)).epsilon(1e-10));
  CHECK(weighted_norm(G, 2) == doctest::Approx(std::sqrt(oracle)).epsilon(1e-8));

  CHECK_THROWS_AS(weighted_norm(G, -1), std::invalid_argument);
  ScalarField phys = gauss_field(g, Frame::Physical);
  CHECK_THROWS_AS(weighted_norm(phys, 2), std::invalid_argument);
}

TEST_CASE("norm monotonicity in the weight order") {
  Grid g = make_grid(64, 10.0);
  for (unsigned seed = 0; seed < 20; ++seed) {
    ScalarField f = random_localized(g, 100 + seed);
    const Real n0 = weighted_norm(f, 0);
    const Real n2 = weighted_norm(f, 2);
    const Real n3 = weighted_norm(f, 3);
    CHECK(n0 <= n2);
    CHECK(n2 <= n3);
  }
}

TEST_CASE("L1 embedding |f|_1 <= C_m ||f||_m with C_m = |b^-m|_2") {
  // Cauchy-Schwarz with the computable constants C_2 = sqrt(pi),
  // C_3 = sqrt(pi/2).
  Grid g = make_grid(64, 10.0);
  for (unsigned seed = 0; seed < 100; ++seed) {
    ScalarField f = random_localized(g, 300 + seed);
    const Real l1 = lp_norm(f, 1.0);
    CHECK(l1 <= std::sqrt(M_PI) * weighted_norm(f, 2) * (1 + 1e-12));
    CHECK(l1 <= std::sqrt(M_PI / 2.0) * weighted_norm(f, 3) * (1 + 1e-12));
  }
}

TEST_CASE("moments of the Gaussian and its first derivatives") {
  Grid g = make_grid(256, 12.0);
  ScalarField G = gauss_field(g);
  Moments mG = moments(G);
  CHECK(mG.mass == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(mG.m1) <= 1e-12);
  CHECK(std::abs(mG.m2) <= 1e-12);

  // F_i = d_i G has moments (0, -delta_i1, -delta_i2).
  ScalarField F1 = gradient_component(G, 0);
  Moments mF1 = moments(F1);
  CHECK(std::abs(mF1.mass) <= 1e-10);
  CHECK(mF1.m1 == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK(std::abs(mF1.m2) <= 1e-10);

  ScalarField F2 = gradient_component(G, 1);
  Moments mF2 = moments(F2);
  CHECK(std::abs(mF2.mass) <= 1e-10);
  CHECK(std::abs(mF2.m1) <= 1e-10);
  CHECK(mF2.m2 == doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("from_scaled maps G to the spreading vortex profile") {
  // w = G in scaled variables corresponds to
  // v(x, t) = exp(-|x|^2/(4(1+t))) / (4 pi (1+t)).
  Grid gs = make_grid(128, 12.0);
  Grid gp = make_grid(128, 16.0);
  ScalarField G = gauss_field(gs);
  const Real tau = std::log(1.0 + 3.0);
  auto [v, t] = from_scaled(G, tau, gp);
  CHECK(t == doctest::Approx(3.0).epsilon(1e-14));
  Eigen::ArrayXXd exact =
      (-gp.radius_squared() / (4.0 * (1.0 + t))).exp() / (4.0 * M_PI * (1.0 + t));
  CHECK(vche::testing::max_abs_diff(v.values(), exact) <= 1e-10);
}

TEST_CASE("scaled/physical roundtrip is the identity on decaying fields") {
  Grid gs = make_grid(128, 12.0);
  Grid gp = make_grid(128, 16.0);
  ScalarField w = dealias(random_localized(gs, 42));
  const Real t = 0.44;
  const Real tau = std::log(1.0 + t);

  auto [v, t_out] = from_scaled(w, tau, gp);
  CHECK(t_out == doctest::Approx(t).epsilon(1e-14));
  auto [w_back, tau_out] = to_scaled(v, t_out, gs);
  CHECK(tau_out == doctest::Approx(tau).epsilon(1e-14));
  CHECK(vche::testing::max_abs_diff(w_back.values(), w.values()) <= 1e-10);

  // Mass is invariant under the frame map.
  CHECK(integrate(v) == doctest::Approx(integrate(w)).epsilon(1e-10));
}

TEST_CASE("frame map rejects fabrication and wrong frames") {
  Grid gs = make_grid(64, 12.0);
  Grid gp = make_grid(64, 16.0);
  ScalarField w = random_localized(gs, 5);
  CHECK_THROWS_AS(to_scaled(w, 1.0, gs), std::invalid_argument);  // wrong frame

  ScalarField vphys = random_localized(gp, 6, Frame::Physical);
  CHECK_THROWS_AS(from_scaled(vphys, 1.0, gs), std::invalid_argument);
  CHECK_THROWS_AS(to_scaled(vphys, -1.0, gs), std::invalid_argument);

  // A field that has NOT decayed at the boundary cannot be dilated
  // beyond the box: constant-one field, lambda > 1.
  ScalarField ones(gp, Frame::Physical,
                   Eigen::ArrayXXd::Ones(gp.n(), gp.n()));
  CHECK_THROWS_AS(to_scaled(ones, 3.0, gs), std::invalid_argument);
}
