// Closed-form special fields, their algebraic/evolution identities, and the
// moment projection.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "vche/eigenbasis.hpp"
#include "vche/norms.hpp"
#include "vche/operators.hpp"
#include "vche/spectral.hpp"
#include "test_support.hpp"

using namespace vche;

TEST_CASE("gaussian_G: peak, mass, moments") {
  Grid g = make_grid(256, 12.0);
  ScalarField G = gaussian_G(g);
  // coords[128] = 0 exactly.
  CHECK(G.values()(128, 128) == 1.0 / (4.0 * M_PI));
  CHECK(integrate(G) == doctest::Approx(1.0).epsilon(1e-10));
  Moments m = moments(G);
  CHECK(std::abs(m.m1) <= 1e-12);
  CHECK(std::abs(m.m2) <= 1e-12);
  CHECK(boundary_tail_ratio(G) <= 1e-12);
}

TEST_CASE("hermite_F: oddness, moments, component index checks") {
  Grid g = make_grid(256, 12.0);
  ScalarField F1 = hermite_F(g, 1);
  ScalarField F2 = hermite_F(g, 2);
  CHECK(F1.values()(128, 128) == 0.0);
  CHECK(F2.values()(128, 128) == 0.0);

  Moments m1 = moments(F1);
  CHECK(std::abs(m1.mass) <= 1e-10);
  CHECK(m1.m1 == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK(std::abs(m1.m2) <= 1e-10);
  Moments m2 = moments(F2);
  CHECK(std::abs(m2.m1) <= 1e-10);
  CHECK(m2.m2 == doctest::Approx(-1.0).epsilon(1e-8));

  // F_i is the spectral derivative of G up to periodization roundoff.
  ScalarField dG = gradient_component(gaussian_G(g), 0);
  CHECK(vche::testing::max_abs_diff(F1.values(), dG.values()) <= 1e-12);

  CHECK_THROWS_AS(hermite_F(g, 0), std::invalid_argument);
  CHECK_THROWS_AS(hermite_F(g, 3), std::invalid_argument);
}

TEST_CASE("gamma/lambda: alpha = 0 reduction and long-time limit") {
  Grid g = make_grid(128, 12.0);
  CHECK(vche::testing::max_abs_diff(gamma_field(g, 0.7, 0.0).values(),
                                    gaussian_G(g).values()) == 0.0);
  CHECK(vche::testing::max_abs_diff(lambda_field(g, 1, 0.7, 0.0).values(),
                                    hermite_F(g, 1).values()) == 0.0);
  CHECK(vche::testing::max_abs_diff(gamma_field(g, 30.0, 0.1).values(),
                                    gaussian_G(g).values()) <= 1e-10);
  CHECK_THROWS_AS(gamma_field(g, -1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(lambda_field(g, 1, 0.5, -0.1), std::invalid_argument);
}

TEST_CASE("velocity_vG: center limit, value pin, curl") {
  Grid g = make_grid(256, 16.0);
  VectorField v = velocity_vG(g);
  CHECK(v.c1.values()(128, 128) == 0.0);
  CHECK(v.c2.values()(128, 128) == 0.0);
  // (2, 0) is a collocation point on this grid.
  CHECK(std::abs(v.c1.values()(144, 128)) == 0.0);
  CHECK(v.c2.values()(144, 128) ==
        doctest::Approx((1.0 - std::exp(-1.0)) / (4.0 * M_PI))
            .epsilon(1e-12));
  // Nothing blows up at the smallest nonzero radius (series limit branch).
  CHECK(std::isfinite(v.c1.values()(129, 128)));

  // The curl of v^G recovers G in the interior up to the box effect of the
  // 1/r velocity tail under periodic spectral differentiation (~5e-4 here;
  // mean-free configurations recover curl to 1e-10, see the operators
  // suite).
  ScalarField w = curl(v);
  const Eigen::ArrayXXd r2 = g.radius_squared();
  const Eigen::ArrayXXd& G = gaussian_G(g).values();
  double worst = 0.0;
  for (int j = 0; j < g.n(); ++j) {
    for (int i = 0; i < g.n(); ++i) {
      if (r2(i, j) <= 16.0) {
        worst = std::max(worst, std::abs(w.values()(i, j) - G(i, j)));
      }
    }
  }
  CHECK(worst <= 1e-3);
}

TEST_CASE("velocity_vF: center value, weak divergence, box-effect bound") {
  Grid g = make_grid(256, 12.0);
  VectorField v1 = velocity_vF(g, 1);
  // d1 v^G at the origin is (0, 1/(8 pi)).
  CHECK(std::abs(v1.c1.values()(128, 128)) <= 1e-15);
  CHECK(v1.c2.values()(128, 128) ==
        doctest::Approx(1.0 / (8.0 * M_PI)).epsilon(1e-12));
  VectorField v2 = velocity_vF(g, 2);
  CHECK(v2.c1.values()(128, 128) ==
        doctest::Approx(-1.0 / (8.0 * M_PI)).epsilon(1e-12));

  // Divergence-free in the weak sense (see operators suite for rationale).
  for (int i = 1; i <= 2; ++i) {
    VectorField v = velocity_vF(g, i);
    for (double cx : {0.0, 1.5}) {
      Eigen::ArrayXXd psi = (-((g.coord_array(0) - cx).square() +
                               (g.coord_array(1) + 0.5 * cx).square()) /
                             3.0)
                                .exp();
      ScalarField psif(g, Frame::Scaled, std::move(psi));
      VectorField gp = gradient(psif);
      ScalarField integrand(g, Frame::Scaled,
                            gp.c1.values() * v.c1.values() +
                                gp.c2.values() * v.c2.values());
      CHECK(std::abs(integrate(integrand)) <= 1e-12);
    }
    // The periodic inversion of F_i agrees with the closed form up to the
    // O(1/H) box correction of the r^{-2} velocity tail.
    VectorField ubs = biot_savart(hermite_F(g, i));
    CHECK(vche::testing::max_abs_diff(ubs.c1.values(), v.c1.values()) <= 2e-3);
    CHECK(vche::testing::max_abs_diff(ubs.c2.values(), v.c2.values()) <= 2e-3);
  }
}

TEST_CASE("oseen_vortex: peak, mass, heat-flow consistency") {
  Grid g = make_grid(256, 40.0);
  ScalarField O0 = oseen_vortex(g, 0.0);
  CHECK(O0.values()(128, 128) == 1.0 / (4.0 * M_PI));
  for (double t : {0.0, 3.0, 10.0}) {
    CHECK(integrate(oseen_vortex(g, t)) == doctest::Approx(1.0).epsilon(1e-10));
  }
  ScalarField flowed = heat_semigroup(O0, 10.0);
  CHECK(vche::testing::max_abs_diff(flowed.values(),
                                    oseen_vortex(g, 10.0).values()) <= 1e-10);
  CHECK_THROWS_AS(oseen_vortex(g, -0.5), std::invalid_argument);
}

TEST_CASE("project: basis recovery, moment-free remainder, idempotence") {
  Grid g = make_grid(256, 12.0);
  ScalarField G = gaussian_G(g);
  ScalarField F1 = hermite_F(g, 1);
  ScalarField F2 = hermite_F(g, 2);

  Projection pG = project(G, 2);
  CHECK(pG.coeffs.a == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(pG.coeffs.b1 == 0.0);
  CHECK(pG.coeffs.b2 == 0.0);
  CHECK(pG.g.values().abs().maxCoeff() <= 1e-12);

  ScalarField combo(g, Frame::Scaled,
                    0.3 * G.values() + 0.1 * F1.values() - 0.2 * F2.values());
  Moments mc = moments(combo);
  CHECK(mc.mass == doctest::Approx(0.3).epsilon(1e-10));
  CHECK(mc.m1 == doctest::Approx(-0.1).epsilon(1e-8));
  CHECK(mc.m2 == doctest::Approx(0.2).epsilon(1e-8));

  Projection pc = project(combo, 3);
  CHECK(pc.coeffs.a == doctest::Approx(0.3).epsilon(1e-10));
  CHECK(pc.coeffs.b1 == doctest::Approx(0.1).epsilon(1e-8));
  CHECK(pc.coeffs.b2 == doctest::Approx(-0.2).epsilon(1e-8));
  CHECK(pc.g.values().abs().maxCoeff() <= 1e-12);

  // m = 2 keeps the F-part in the remainder.
  Projection p2 = project(combo, 2);
  CHECK(p2.coeffs.a == doctest::Approx(0.3).epsilon(1e-10));
  CHECK(p2.coeffs.b1 == 0.0);
  Moments mg2 = moments(p2.g);
  CHECK(std::abs(mg2.mass) <= 1e-10);
  CHECK(mg2.m1 == doctest::Approx(-0.1).epsilon(1e-8));

  // Even non-basis input: G * xi_1^2 has mass 2 and no first moments.
  ScalarField even(g, Frame::Scaled,
                   G.values() * g.coord_array(0).square());
  Projection pe = project(even, 3);
  CHECK(pe.coeffs.a == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(std::abs(pe.coeffs.b1) <= 1e-10);
  CHECK(std::abs(pe.coeffs.b2) <= 1e-10);
  CHECK(pe.g.values().abs().maxCoeff() > 1e-3);
  Moments mg = moments(pe.g);
  CHECK(std::abs(mg.mass) <= 1e-8);
  CHECK(std::abs(mg.m1) <= 1e-8);
  CHECK(std::abs(mg.m2) <= 1e-8);

  // Idempotence: the remainder projects to zero coefficients.
  Projection again = project(pe.g, 3);
  CHECK(std::abs(again.coeffs.a) <= 1e-10);
  CHECK(std::abs(again.coeffs.b1) <= 1e-10);
  CHECK(std::abs(again.coeffs.b2) <= 1e-10);
  CHECK(vche::testing::max_abs_diff(again.g.values(), pe.g.values()) <= 1e-12);

  CHECK_THROWS_AS(project(G, 4), std::invalid_argument);
  ScalarField phys(g, Frame::Physical, G.values());
  CHECK_THROWS_AS(project(phys, 2), std::invalid_argument);
}

TEST_CASE("stationarity: v^G is tangent to the level sets of Gamma") {
  Grid g = make_grid(256, 12.0);
  VectorField vg = velocity_vG(g);
  for (double tau : {0.0, 1.0, 5.0}) {
    ScalarField Gam = gamma_field(g, tau, 0.1);
    VectorField dG = gradient(Gam);
    Eigen::ArrayXXd res =
        vg.c1.values() * dG.c1.values() + vg.c2.values() * dG.c2.values();
    CHECK(res.abs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("Gamma solves the linear flow: L Gamma = alpha^2 e^{-tau} Lap G") {
  // Both d_tau Gamma and L Gamma equal alpha^2 e^{-tau} Laplacian(G): the
  // filtered Gaussian is an exact solution of d_tau w = L w.
  Grid g = make_grid(256, 12.0);
  const Real alpha = 0.1;
  for (double tau : {0.0, 0.5, 2.0}) {
    const Real c = alpha * alpha * std::exp(-tau);
    ScalarField Gam = gamma_field(g, tau, alpha);
    ScalarField LGam = apply_L(Gam);
    Eigen::ArrayXXd lapG =
        (g.radius_squared() / 4.0 - 1.0) * gaussian_G(g).values();
    ScalarField res(g, Frame::Scaled, LGam.values() - c * lapG);
    CHECK(weighted_norm(res, 2) <= 1e-8);
  }
}

TEST_CASE("Lambda evolution identity: d_tau Lambda = L Lambda + Lambda/2") {
  // With d_tau Lambda_i = +alpha^2 e^{-tau} Laplacian(F_i) in closed form;
  // the F_i eigenvalue -1/2 fixes the sign of the half-term.
  Grid g = make_grid(256, 12.0);
  const Real alpha = 0.1;
  for (double tau : {0.0, 0.5}) {
    const Real c = alpha * alpha * std::exp(-tau);
    for (int i = 1; i <= 2; ++i) {
      ScalarField Lam = lambda_field(g, i, tau, alpha);
      ScalarField LLam = apply_L(Lam);
      Eigen::ArrayXXd lapF = 0.5 * g.coord_array(i - 1) *
                             (2.0 - g.radius_squared() / 4.0) *
                             gaussian_G(g).values();
      ScalarField res(g, Frame::Scaled,
                      c * lapF - LLam.values() - 0.5 * Lam.values());
      CHECK(weighted_norm(res, 2) <= 1e-8);
    }
  }
}

TEST_CASE("mixed transport identity: v^F.grad Gamma + v^G.grad Lambda = 0") {
  Grid g = make_grid(256, 12.0);
  const Real alpha = 0.1;
  VectorField vg = velocity_vG(g);
  for (double tau : {0.0, 0.3}) {
    ScalarField Gam = gamma_field(g, tau, alpha);
    VectorField dGam = gradient(Gam);
    for (int i = 1; i <= 2; ++i) {
      ScalarField Lam = lambda_field(g, i, tau, alpha);
      VectorField dLam = gradient(Lam);
      VectorField vf = velocity_vF(g, i);
      Eigen::ArrayXXd res = vf.c1.values() * dGam.c1.values() +
                            vf.c2.values() * dGam.c2.values() +
                            vg.c1.values() * dLam.c1.values() +
                            vg.c2.values() * dLam.c2.values();
      CHECK(res.abs().maxCoeff() <= 1e-6);
    }
  }
}
