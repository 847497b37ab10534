#include "vche/scaling.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "vche/spectral.hpp"

namespace vche {

namespace {

// Full n x n complex coefficient matrix of the true exp(i k . xi) series,
// reconstructed from the half spectrum. The Nyquist row/column is dropped
// (it has no unambiguous dilated evaluation and is zero for dealiased
// fields anyway).
Eigen::MatrixXcd full_coefficients(const ScalarField& f) {
  const Grid& g = f.grid();
  const int n = g.n();
  const auto& raw = f.spec();
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
  const Real norm = 1.0 / (static_cast<Real>(n) * n);
  for (int m1 = 0; m1 < n / 2; ++m1) {
    for (int m2 = 0; m2 < n; ++m2) {
      if (m2 == n / 2) continue;
      const int s = ((m1 + m2) % 2 == 0) ? 1 : -1;
      const std::complex<double> c = raw(m1, m2) * (s * norm);
      C(m1, m2) = c;
      if (m1 > 0 || m2 > 0) {
        C((n - m1) % n, (n - m2) % n) = std::conj(c);
      }
    }
  }
  return C;
}

}  // namespace

ScalarField resample_dilate(const ScalarField& src, Real lambda,
                            const Grid& target, Frame target_frame) {
  if (!(lambda > Real(0))) {
    throw std::invalid_argument("resample_dilate: dilation must be positive");
  }
  const Grid& gs = src.grid();
  const int ns = gs.n();
  const int nt = target.n();
  const Real limit = gs.half_width() - gs.spacing();

  // Mapped points beyond the source box carry no information; they are
  // zero-filled below, legitimate only if the source really has decayed.
  const Real mapped_max =
      lambda * std::max(std::abs(target.coords()[0]),
                        std::abs(target.coords()[nt - 1]));
  if (mapped_max > limit && boundary_tail_ratio(src) > 1e-9) {
    throw std::invalid_argument(
        "resample_dilate: mapped points leave the source box but the "
        "source has not decayed at its boundary");
  }

  Eigen::MatrixXcd C = full_coefficients(src);

  // Evaluation matrix E(a, m) = exp(i k_m lambda x_a); both axes share it
  // on a square grid. The series evaluation is the pair of dense products
  // E * C * E^T.
  Eigen::MatrixXcd E(nt, ns);
  for (int a = 0; a < nt; ++a) {
    const Real y = lambda * target.coords()[a];
    for (int m = 0; m < ns; ++m) {
      const Real phase = gs.wavenumbers_full()[m] * y;
      E(a, m) = std::complex<double>(std::cos(phase), std::sin(phase));
    }
  }

  Eigen::MatrixXcd tmp = E * C;
  Eigen::ArrayXXd out = (tmp * E.transpose()).real().array();

  // Zero the rows/columns of target points that mapped outside the box.
  for (int a = 0; a < nt; ++a) {
    if (std::abs(lambda * target.coords()[a]) > limit) {
      out.row(a).setZero();
      out.col(a).setZero();
    }
  }
  return ScalarField(target, target_frame, std::move(out));
}

std::pair<ScalarField, Real> to_scaled(const ScalarField& v, Real t,
                                       const Grid& target) {
  if (v.frame() != Frame::Physical) {
    throw std::invalid_argument("to_scaled: input must be a physical field");
  }
  if (!(t > Real(-1))) {
    throw std::invalid_argument("to_scaled: need t > -1");
  }
  const Real lambda = std::sqrt(Real(1) + t);
  ScalarField w = resample_dilate(v, lambda, target, Frame::Scaled);
  w.values() *= (Real(1) + t);
  return {std::move(w), std::log(Real(1) + t)};
}

std::pair<ScalarField, Real> from_scaled(const ScalarField& w, Real tau,
                                         const Grid& target) {
  if (w.frame() != Frame::Scaled) {
    throw std::invalid_argument("from_scaled: input must be a scaled field");
  }
  const Real t = std::expm1(tau);
  const Real lambda = Real(1) / std::sqrt(Real(1) + t);
  ScalarField v = resample_dilate(w, lambda, target, Frame::Physical);
  v.values() /= (Real(1) + t);
  return {std::move(v), t};
}

}  // namespace vche
