#include "vche/evolution.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "vche/eigenbasis.hpp"
#include "vche/operators.hpp"
#include "vche/quadrature.hpp"
#include "vche/spectral.hpp"

namespace vche {

namespace {

// Barycentric-free Lagrange weights: ell_m(r) over the node set s[].
Real lagrange_basis(const std::vector<Real>& s, int m, Real r) {
  Real value = 1.0;
  for (std::size_t p = 0; p < s.size(); ++p) {
    if (static_cast<int>(p) == m) continue;
    value *= (r - s[p]) / (s[static_cast<std::size_t>(m)] - s[p]);
  }
  return value;
}

}  // namespace

ScalarField picard_mild_solve(const ScalarField& v0, Real t, int iterations,
                              const PicardOptions& options,
                              std::vector<Real>* iterate_gaps) {
  if (v0.frame() != Frame::Physical) {
    throw std::invalid_argument(
        "picard_mild_solve: initial data must be physical-frame");
  }
  if (t < 0.0) {
    throw std::invalid_argument("picard_mild_solve: t must be >= 0");
  }
  if (iterations < 1) {
    throw std::invalid_argument("picard_mild_solve: iterations must be >= 1");
  }
  if (options.alpha < 0.0) {
    throw std::invalid_argument("picard_mild_solve: alpha must be >= 0");
  }
  if (iterate_gaps) iterate_gaps->clear();
  if (t == 0.0) return v0;

  const Grid& g = v0.grid();
  const Eigen::ArrayXXd ksq = g.ksq_array();
  const Eigen::ArrayXXcd v0_raw = v0.spec();
  const Real coeff = options.alpha * options.alpha;
  const Real h = g.spacing();

  const auto outer = gauss_legendre(options.nodes, 0.0, t);
  const int m = static_cast<int>(outer.size());
  std::vector<Real> s(static_cast<std::size_t>(m));
  for (int q = 0; q < m; ++q) s[static_cast<std::size_t>(q)] = outer[q].first;

  // Mass-and-moment split of the velocity, as in filtered_velocity.
  ScalarField carrier = gaussian_G(g);
  const Eigen::ArrayXXcd carrier_raw = carrier.spec();
  VectorField vg = velocity_vG(g);
  const Eigen::ArrayXXd vg1 = vg.c1.values();
  const Eigen::ArrayXXd vg2 = vg.c2.values();
  ScalarField f1 = hermite_F(g, 1);
  ScalarField f2 = hermite_F(g, 2);
  const Eigen::ArrayXXcd f1_raw = f1.spec();
  const Eigen::ArrayXXcd f2_raw = f2.spec();
  VectorField vf1 = velocity_vF(g, 1);
  VectorField vf2 = velocity_vF(g, 2);
  const Eigen::ArrayXXd x1 = g.coord_array(0);
  const Eigen::ArrayXXd x2 = g.coord_array(1);

  // Spectral divergence of the advective flux u v at one node.
  auto product_divergence = [&](const Eigen::ArrayXXcd& vraw) {
    const Eigen::ArrayXXd v_v = fft_inverse(g, vraw);
    Eigen::ArrayXXcd omega = vraw / (1.0 + coeff * ksq);
    const Real mass = omega(0, 0).real() * h * h;
    const Real b1 = -(x1 * v_v).sum() * h * h;
    const Real b2 = -(x2 * v_v).sum() * h * h;
    omega -= mass * carrier_raw + b1 * f1_raw + b2 * f2_raw;
    Eigen::ArrayXXcd u1h, u2h;
    biot_savart_spec(g, omega, u1h, u2h);
    const Eigen::ArrayXXd u1 = fft_inverse(g, u1h) + mass * vg1 +
                               b1 * vf1.c1.values() + b2 * vf2.c1.values();
    const Eigen::ArrayXXd u2 = fft_inverse(g, u2h) + mass * vg2 +
                               b1 * vf1.c2.values() + b2 * vf2.c2.values();
    Eigen::ArrayXXcd div =
        gradient_spec(g, fft_forward(g, u1 * v_v), 0) +
        gradient_spec(g, fft_forward(g, u2 * v_v), 1);
    if (options.dealias_products) dealias_spec(g, div);
    return div;
  };

  // Heat propagation of the initial data to each node, fixed across
  // iterations.
  std::vector<Eigen::ArrayXXcd> heat_part;
  heat_part.reserve(static_cast<std::size_t>(m));
  for (int q = 0; q < m; ++q) {
    heat_part.emplace_back(v0_raw * (-s[static_cast<std::size_t>(q)] * ksq).exp());
  }

  // Per-node inner rules and Lagrange evaluation matrices, fixed geometry:
  // node q integrates over [0, s_q] with the same order, sampling the
  // divergence interpolant at the inner abscissae.
  std::vector<std::vector<std::pair<Real, Real>>> inner(
      static_cast<std::size_t>(m));
  std::vector<Eigen::MatrixXd> lagrange(static_cast<std::size_t>(m));
  for (int q = 0; q < m; ++q) {
    inner[static_cast<std::size_t>(q)] =
        gauss_legendre(options.nodes, 0.0, s[static_cast<std::size_t>(q)]);
    Eigen::MatrixXd lm(m, m);
    for (int j = 0; j < m; ++j) {
      for (int mm = 0; mm < m; ++mm) {
        lm(j, mm) = lagrange_basis(
            s, mm, inner[static_cast<std::size_t>(q)][static_cast<std::size_t>(j)].first);
      }
    }
    lagrange[static_cast<std::size_t>(q)] = lm;
  }

  std::vector<Eigen::ArrayXXcd> iterate = heat_part;
  std::vector<Eigen::ArrayXXcd> divergence_at(static_cast<std::size_t>(m));

  Real previous_gap = std::numeric_limits<Real>::infinity();
  const Real v0_scale = std::sqrt(spectral_energy(g, v0_raw));

  for (int it = 0; it < iterations; ++it) {
    if (!options.zero_velocity) {
      for (int q = 0; q < m; ++q) {
        divergence_at[static_cast<std::size_t>(q)] =
            product_divergence(iterate[static_cast<std::size_t>(q)]);
      }
    }

    Real gap = 0.0;
    for (int q = 0; q < m; ++q) {
      Eigen::ArrayXXcd next = heat_part[static_cast<std::size_t>(q)];
      if (!options.zero_velocity) {
        const auto& rule = inner[static_cast<std::size_t>(q)];
        const auto& lm = lagrange[static_cast<std::size_t>(q)];
        for (int j = 0; j < m; ++j) {
          Eigen::ArrayXXcd sample =
              Eigen::ArrayXXcd::Zero(ksq.rows(), ksq.cols());
          for (int mm = 0; mm < m; ++mm) {
            sample += lm(j, mm) * divergence_at[static_cast<std::size_t>(mm)];
          }
          const Real r = rule[static_cast<std::size_t>(j)].first;
          const Real weight = rule[static_cast<std::size_t>(j)].second;
          next -= weight *
                  (sample * (-(s[static_cast<std::size_t>(q)] - r) * ksq).exp());
        }
      }
      const Real node_gap = std::sqrt(spectral_energy(
          g, (next - iterate[static_cast<std::size_t>(q)]).eval()));
      gap = std::max(gap, node_gap);
      iterate[static_cast<std::size_t>(q)] = std::move(next);
    }

    if (iterate_gaps) iterate_gaps->push_back(gap);
    if (gap > previous_gap && gap > 1e-14 * (1.0 + v0_scale)) {
      std::ostringstream msg;
      msg << "picard_mild_solve: iterate distances grew (diverging):";
      if (iterate_gaps) {
        for (Real gd : *iterate_gaps) msg << " " << gd;
      } else {
        msg << " last " << previous_gap << " -> " << gap;
      }
      throw std::runtime_error(msg.str());
    }
    previous_gap = gap;
  }

  // Endpoint assembly with the final iterate's transport term: the outer
  // rule on [0, t] needs the integrand only at the iterate's own nodes.
  Eigen::ArrayXXcd result = v0_raw * (-t * ksq).exp();
  if (!options.zero_velocity) {
    for (int q = 0; q < m; ++q) {
      divergence_at[static_cast<std::size_t>(q)] =
          product_divergence(iterate[static_cast<std::size_t>(q)]);
    }
    for (int q = 0; q < m; ++q) {
      const Real weight = outer[static_cast<std::size_t>(q)].second;
      result -= weight * (divergence_at[static_cast<std::size_t>(q)] *
                          (-(t - s[static_cast<std::size_t>(q)]) * ksq).exp());
    }
  }

  ScalarField out(g, Frame::Physical);
  out.set_spec(result);
  return out;
}

}  // namespace vche
