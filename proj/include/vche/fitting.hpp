#pragma once

/// Least-squares extraction of decay exponents from time series of norms.
///
/// Both asymptotic regimes in this codebase are power laws in disguise:
/// scaled-frame quantities decay like e^{s tau} (log-linear in tau) and
/// physical-frame quantities like t^s (log-linear in log t). The fit is an
/// ordinary least-squares line through the logarithm of the values against
/// the appropriate abscissa, restricted to a time window that skips the
/// transient.

#include <cstddef>
#include <utility>
#include <vector>

#include "vche/field.hpp"

namespace vche {

/// Abscissa choice for the regression.
///
///  LogLinear  log(value) against time       (scaled frame, e^{s tau} laws)
///  LogLog     log(value) against log(time)  (physical frame, t^s laws)
enum class FitAxis { LogLinear, LogLog };

struct FitResult {
  Real slope = 0.0;
  Real intercept = 0.0;
  // Max absolute deviation of log(value) from the fitted line over the
  // window: a direct certificate of how well the series obeys a pure
  // exponential/power law.
  Real residual = 0.0;
  std::size_t samples = 0;
};

/// Fit log(value) against the chosen abscissa over samples whose time lies
/// in [window_lo, window_hi].
///
/// Throws std::invalid_argument if fewer than 10 samples fall in the
/// window, if any value in the series is not strictly positive, or if a
/// sample in the window has a nonpositive time in LogLog mode.
FitResult fit_decay_exponent(const std::vector<std::pair<Real, Real>>& series,
                             Real window_lo, Real window_hi, FitAxis axis);

}  // namespace vche
