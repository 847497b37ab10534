#include "vche/fitting.hpp"

#include <cmath>
#include <stdexcept>

namespace vche {

FitResult fit_decay_exponent(const std::vector<std::pair<Real, Real>>& series,
                             Real window_lo, Real window_hi, FitAxis axis) {
  for (const auto& [t, v] : series) {
    if (!(v > 0.0)) {
      throw std::invalid_argument(
          "fit_decay_exponent: series values must be strictly positive");
    }
  }

  std::vector<Real> xs;
  std::vector<Real> ys;
  for (const auto& [t, v] : series) {
    if (t < window_lo || t > window_hi) continue;
    if (axis == FitAxis::LogLog) {
      if (!(t > 0.0)) {
        throw std::invalid_argument(
            "fit_decay_exponent: log-log fit needs positive times in the "
            "window");
      }
      xs.push_back(std::log(t));
    } else {
      xs.push_back(t);
    }
    ys.push_back(std::log(v));
  }
  if (xs.size() < 10) {
    throw std::invalid_argument(
        "fit_decay_exponent: need at least 10 samples in the fit window");
  }

  // Ordinary least squares about the means; centering keeps the normal
  // equations well conditioned for windows far from the origin.
  const Real n = static_cast<Real>(xs.size());
  Real mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  Real sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) {
    throw std::invalid_argument(
        "fit_decay_exponent: degenerate window (all abscissae equal)");
  }

  FitResult out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  out.samples = xs.size();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out.residual = std::max(
        out.residual, std::abs(ys[i] - (out.intercept + out.slope * xs[i])));
  }
  return out;
}

}  // namespace vche
