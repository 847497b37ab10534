#include "vche/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "vche/eigenbasis.hpp"
#include "vche/operators.hpp"
#include "vche/spectral.hpp"

namespace vche {

namespace {

constexpr Real kPi = 3.14159265358979323846;

}  // namespace

// Everything the stepper reuses across steps: the integrating-factor
// multipliers for the step length in use, and the closed-form background
// fields of the reduced systems (all time dependence of Gamma/Lambda sits
// in a scalar coefficient, so caching the tau-independent pieces suffices).
struct StepperTables {
  Real dt = 0.0;

  Eigen::ArrayXXd ksq;                    // |k|^2, half-spectrum layout
  Eigen::ArrayXXd e_full, e_half, e_neg_half;  // exp(s (gamma - |k|^2))

  Eigen::ArrayXXd carrier;                // Gaussian profile G
  Eigen::ArrayXXcd carrier_raw;           // its raw spectrum
  Eigen::ArrayXXd vg1, vg2;               // closed-form velocity of G
  Eigen::ArrayXXd lap_g;                  // Laplacian G (closed form)
  Eigen::ArrayXXd f1, f2, lap_f1, lap_f2; // F_i and Laplacian F_i
  Eigen::ArrayXXcd f1_raw, f2_raw;        // raw spectra of F_i
  Eigen::ArrayXXd vf11, vf12;             // velocity of F_1, components
  Eigen::ArrayXXd vf21, vf22;             // velocity of F_2, components
  Eigen::ArrayXXd x1, x2;                 // coordinates (drift product)
};

namespace {

std::shared_ptr<const StepperTables> build_tables(const Grid& g,
                                                  const SimConfig& cfg,
                                                  Real dt) {
  auto tb = std::make_shared<StepperTables>();
  tb->dt = dt;
  tb->ksq = g.ksq_array();

  const Real gamma = (cfg.frame == Frame::Scaled) ? 1.0 : 0.0;
  if (dt != 0.0) {
    tb->e_full = (dt * (gamma - tb->ksq)).exp();
    tb->e_half = (0.5 * dt * (gamma - tb->ksq)).exp();
    tb->e_neg_half = (-0.5 * dt * (gamma - tb->ksq)).exp();
  }

  ScalarField carrier = gaussian_G(g);
  tb->carrier = carrier.values();
  tb->carrier_raw = carrier.spec();
  VectorField vg = velocity_vG(g);
  tb->vg1 = vg.c1.values();
  tb->vg2 = vg.c2.values();

  // gamma_field(tau = 0, alpha = 1) is G - Laplacian G in closed form, so
  // the cached Laplacian comes from the same expressions the eigenbasis
  // module tests pin down; likewise for Lambda.
  tb->lap_g = tb->carrier - gamma_field(g, 0.0, 1.0).values();
  ScalarField f1 = hermite_F(g, 1);
  ScalarField f2 = hermite_F(g, 2);
  tb->f1 = f1.values();
  tb->f2 = f2.values();
  tb->f1_raw = f1.spec();
  tb->f2_raw = f2.spec();
  tb->lap_f1 = tb->f1 - lambda_field(g, 1, 0.0, 1.0).values();
  tb->lap_f2 = tb->f2 - lambda_field(g, 2, 0.0, 1.0).values();
  VectorField vf1 = velocity_vF(g, 1);
  VectorField vf2 = velocity_vF(g, 2);
  tb->vf11 = vf1.c1.values();
  tb->vf12 = vf1.c2.values();
  tb->vf21 = vf2.c1.values();
  tb->vf22 = vf2.c2.values();

  tb->x1 = g.coord_array(0);
  tb->x2 = g.coord_array(1);
  return tb;
}

struct VelocityValues {
  Eigen::ArrayXXd u1, u2;
  Real mass = 0.0;
};

// Filtered velocity from a raw spectrum, through the same mass-and-moment
// split as operators::filtered_velocity: the periodic inversion only ever
// sees a mean- and moment-free spectrum, while the mass and first moments
// ride on closed-form pairs. The moment part of the split is what keeps
// the e^{-tau/2} first-moment decay law exact on the grid: the inversion's
// removed-mean rigid rotation couples only to first moments, and those are
// zero in the remainder by construction.
//
// w_v holds the physical-space samples of the SAME spectrum; the filter
// leaves first moments unchanged (the moment difference is a quadrature of
// coordinate times Laplacian, whose integral vanishes for localized
// fields), so the moments are read off the unfiltered samples the caller
// already has.
VelocityValues velocity_from_spec(const Grid& g, const StepperTables& tb,
                                  const Eigen::ArrayXXcd& what,
                                  const Eigen::ArrayXXd& w_v,
                                  Real filter_coeff) {
  Eigen::ArrayXXcd omega = what / (1.0 + filter_coeff * tb.ksq);
  const Real h = g.spacing();
  const Real mass = omega(0, 0).real() * h * h;
  const Real b1 = -(tb.x1 * w_v).sum() * h * h;
  const Real b2 = -(tb.x2 * w_v).sum() * h * h;
  omega -= mass * tb.carrier_raw + b1 * tb.f1_raw + b2 * tb.f2_raw;

  Eigen::ArrayXXcd u1h, u2h;
  biot_savart_spec(g, omega, u1h, u2h);

  VelocityValues v;
  v.u1 = fft_inverse(g, u1h) + mass * tb.vg1 + b1 * tb.vf11 + b2 * tb.vf21;
  v.u2 = fft_inverse(g, u2h) + mass * tb.vg2 + b1 * tb.vf12 + b2 * tb.vf22;
  v.mass = mass;
  return v;
}

// Assembled explicit tendency in spectral space: scaled-frame drift plus
// every transported term of the configured system, in divergence form.
// The stiff generator part (Laplacian + identity) is NOT included; the
// stepper applies it exactly through the integrating factor.
//
// When speed1/speed2 are non-null they receive the per-axis maxima of the
// advecting velocity (drift included), for the stability-bound recheck.
Eigen::ArrayXXcd explicit_tendency_hat(const Grid& g, const SimConfig& cfg,
                                       const StepperTables& tb,
                                       const Eigen::ArrayXXcd& what,
                                       Real t_abs, Real* speed1,
                                       Real* speed2) {
  const bool scaled = (cfg.frame == Frame::Scaled);
  const Real coeff = scaled ? cfg.alpha * cfg.alpha * std::exp(-t_abs)
                            : cfg.alpha * cfg.alpha;

  const Eigen::ArrayXXd w_v = fft_inverse(g, what);
  const VelocityValues phi = velocity_from_spec(g, tb, what, w_v, coeff);

  const Real a = cfg.linear.a;
  Eigen::ArrayXXd p1, p2;  // advective flux, physical space

  switch (cfg.system) {
    case SystemKind::Full: {
      p1 = phi.u1 * w_v;
      p2 = phi.u2 * w_v;
      if (speed1) {
        *speed1 = phi.u1.abs().maxCoeff();
        *speed2 = phi.u2.abs().maxCoeff();
      }
      break;
    }
    case SystemKind::Linearized: {
      const Eigen::ArrayXXd gamma_v = tb.carrier - coeff * tb.lap_g;
      p1 = a * (phi.u1 * gamma_v + tb.vg1 * w_v);
      p2 = a * (phi.u2 * gamma_v + tb.vg2 * w_v);
      if (speed1) {
        *speed1 = std::abs(a) *
                  std::max(tb.vg1.abs().maxCoeff(), phi.u1.abs().maxCoeff());
        *speed2 = std::abs(a) *
                  std::max(tb.vg2.abs().maxCoeff(), phi.u2.abs().maxCoeff());
      }
      break;
    }
    case SystemKind::Difference1: {
      const Eigen::ArrayXXd gamma_v = tb.carrier - coeff * tb.lap_g;
      const Eigen::ArrayXXd w1 = a * tb.vg1 + phi.u1;
      const Eigen::ArrayXXd w2 = a * tb.vg2 + phi.u2;
      p1 = w1 * w_v + a * (phi.u1 * gamma_v);
      p2 = w2 * w_v + a * (phi.u2 * gamma_v);
      if (speed1) {
        *speed1 = w1.abs().maxCoeff();
        *speed2 = w2.abs().maxCoeff();
      }
      break;
    }
    case SystemKind::Difference2: {
      const Real b1 = cfg.linear.b1;
      const Real b2 = cfg.linear.b2;
      const Real decay_half = std::exp(-0.5 * t_abs);
      const Eigen::ArrayXXd gamma_v = tb.carrier - coeff * tb.lap_g;
      const Eigen::ArrayXXd lambda_sum = b1 * (tb.f1 - coeff * tb.lap_f1) +
                                         b2 * (tb.f2 - coeff * tb.lap_f2);
      const Eigen::ArrayXXd vsum1 = b1 * tb.vf11 + b2 * tb.vf21;
      const Eigen::ArrayXXd vsum2 = b1 * tb.vf12 + b2 * tb.vf22;
      const Eigen::ArrayXXd w1 = a * tb.vg1 + decay_half * vsum1 + phi.u1;
      const Eigen::ArrayXXd w2 = a * tb.vg2 + decay_half * vsum2 + phi.u2;
      p1 = w1 * w_v + a * (phi.u1 * gamma_v) +
           decay_half * (phi.u1 + decay_half * vsum1) * lambda_sum;
      p2 = w2 * w_v + a * (phi.u2 * gamma_v) +
           decay_half * (phi.u2 + decay_half * vsum2) * lambda_sum;
      if (speed1) {
        *speed1 = w1.abs().maxCoeff();
        *speed2 = w2.abs().maxCoeff();
      }
      break;
    }
  }

  Eigen::ArrayXXcd tendency = -(gradient_spec(g, fft_forward(g, p1), 0) +
                                gradient_spec(g, fft_forward(g, p2), 1));

  if (scaled) {
    const Eigen::ArrayXXd d1 = fft_inverse(g, gradient_spec(g, what, 0));
    const Eigen::ArrayXXd d2 = fft_inverse(g, gradient_spec(g, what, 1));
    const Eigen::ArrayXXd drift = 0.5 * (tb.x1 * d1 + tb.x2 * d2);
    tendency += fft_forward(g, drift);
    if (speed1) {
      *speed1 += 0.5 * g.half_width();
      *speed2 += 0.5 * g.half_width();
    }
  }

  if (cfg.dealias_products) dealias_spec(g, tendency);
  return tendency;
}

// Absolute signed mass carried by the outermost grid ring. The signed sum
// cancels oscillatory spectral ringing at the boundary, while a genuine
// tail reaching the edge is sign-coherent and registers at the level of
// the edge values times the ring area, so the check fires when the box is
// actually short of room rather than on high-mode noise (a max-of-edge-
// values check cannot tell the two apart). Long runs of order-one-mass
// states still show a floor near 2e-10 here: the stepper's smooth global
// residual has a boundary trace proportional to the state amplitude, and
// no boundary functional can distinguish that trace from a real tail of
// equal size. The warning is informational either way.
Real boundary_band_mass(const ScalarField& w) {
  const auto& v = w.values();
  const int n = static_cast<int>(v.rows());
  Real band = 0.0;
  for (int i = 0; i < n; ++i) {
    band += v(i, 0) + v(i, n - 1);
  }
  for (int j = 1; j + 1 < n; ++j) {
    band += v(0, j) + v(n - 1, j);
  }
  const Real h = w.grid().spacing();
  return std::abs(band) * h * h;
}

// Advective stability bound for the three-stage explicit update: the RK3
// stability region covers the imaginary axis up to sqrt(3), the sharpest
// retained wavenumber is the dealias cut, and a 0.9 safety factor absorbs
// variable-coefficient effects.
Real stability_bound(const Grid& g, const SimConfig& cfg, Real speed1,
                     Real speed2) {
  const int max_mode =
      cfg.dealias_products ? g.dealias_limit() : g.n() / 2;
  const Real k_max = max_mode * kPi / g.half_width();
  const Real denom = k_max * (speed1 + speed2);
  if (denom <= 0.0) return std::numeric_limits<Real>::infinity();
  return 0.9 * std::sqrt(3.0) / denom;
}

void ensure_tables(SimState& state, Real dt) {
  if (!state.tables || state.tables->dt != dt) {
    state.tables = build_tables(state.w.grid(), state.config, dt);
  }
}

}  // namespace

SimState make_state(const SimConfig& config, const ScalarField& w0) {
  if (config.n != w0.grid().n() ||
      config.half_width != w0.grid().half_width()) {
    throw std::invalid_argument("make_state: grid does not match config");
  }
  if (config.frame != w0.frame()) {
    throw std::invalid_argument("make_state: frame does not match config");
  }
  if (config.frame == Frame::Physical &&
      config.system != SystemKind::Full) {
    throw std::invalid_argument(
        "make_state: reduced systems are scaled-frame only");
  }
  if (config.alpha < 0.0) {
    throw std::invalid_argument("make_state: alpha must be >= 0");
  }
  if (config.dt <= 0.0) {
    throw std::invalid_argument("make_state: dt must be > 0");
  }
  if (config.observer_stride < 1) {
    throw std::invalid_argument("make_state: observer_stride must be >= 1");
  }
  if (config.time_offset < 0.0) {
    throw std::invalid_argument("make_state: time_offset must be >= 0");
  }

  SimState state{config, 0.0, 0,
                 config.dealias_products ? dealias(w0) : w0,
                 {},   0.0, {},
                 nullptr};
  state.tables = build_tables(state.w.grid(), config, config.dt);

  Real s1 = 0.0, s2 = 0.0;
  explicit_tendency_hat(state.w.grid(), config, *state.tables,
                        state.w.spec(), config.time_offset, &s1, &s2);
  state.cfl_bound = stability_bound(state.w.grid(), config, s1, s2);
  if (config.dt > state.cfl_bound) {
    std::ostringstream msg;
    msg << "make_state: dt = " << config.dt
        << " exceeds the advective stability bound " << state.cfl_bound;
    throw std::invalid_argument(msg.str());
  }
  return state;
}

void step(SimState& state, Real dt) {
  if (dt <= 0.0) throw std::invalid_argument("step: dt must be > 0");
  ensure_tables(state, dt);
  const Grid& g = state.w.grid();
  const SimConfig& cfg = state.config;
  const StepperTables& tb = *state.tables;
  const Real t_abs = cfg.time_offset + state.time;

  const Eigen::ArrayXXcd& w0 = state.w.spec();

  Real s1 = 0.0, s2 = 0.0;
  const Eigen::ArrayXXcd n0 =
      explicit_tendency_hat(g, cfg, tb, w0, t_abs, &s1, &s2);
  const Real bound = stability_bound(g, cfg, s1, s2);
  state.cfl_bound = bound;
  if (dt > bound) {
    std::ostringstream msg;
    msg << "step rejected: dt = " << dt
        << " exceeds the advective stability bound " << bound << " at time "
        << state.time;
    throw std::runtime_error(msg.str());
  }

  const Eigen::ArrayXXcd u1 = tb.e_full * (w0 + dt * n0);
  const Eigen::ArrayXXcd n1 =
      explicit_tendency_hat(g, cfg, tb, u1, t_abs + dt, nullptr, nullptr);
  const Eigen::ArrayXXcd u2 =
      0.75 * (tb.e_half * w0) + 0.25 * (tb.e_neg_half * (u1 + dt * n1));
  const Eigen::ArrayXXcd n2 = explicit_tendency_hat(g, cfg, tb, u2,
                                                    t_abs + 0.5 * dt, nullptr,
                                                    nullptr);
  Eigen::ArrayXXcd out = (1.0 / 3.0) * (tb.e_full * w0) +
                         (2.0 / 3.0) * (tb.e_half * (u2 + dt * n2));

  // Every configured system conserves mass exactly (transport terms are
  // divergence-form against divergence-free velocities, and the drift's
  // mean production cancels the identity term); re-pinning the mean removes
  // the O(dt^4)-per-step integrating-factor residue on that neutral mode.
  out(0, 0) = w0(0, 0);

  state.w.set_spec(out);
  state.time += dt;
  ++state.steps_taken;

  if (!state.w.values().allFinite()) {
    std::ostringstream msg;
    msg << "step: non-finite state at time " << state.time << " (step "
        << state.steps_taken << ")";
    throw std::runtime_error(msg.str());
  }

  state.moment_history.push_back(moments(state.w));

  const Real tail = boundary_band_mass(state.w);
  if (tail > 1e-10) {
    const bool already = std::any_of(
        state.warnings.begin(), state.warnings.end(), [](const auto& w) {
          return w.find("boundary tail") != std::string::npos;
        });
    if (!already) {
      std::ostringstream msg;
      msg << "boundary tail mass " << tail << " exceeds 1e-10 at time "
          << state.time << "; the state may be short of room in this box";
      state.warnings.push_back(msg.str());
    }
  }
}

void step(SimState& state) { step(state, state.config.dt); }

void run_to(SimState& state, Real t_end, const Observer& observer) {
  if (t_end < state.time - 1e-12) {
    throw std::invalid_argument("run_to: t_end precedes the current time");
  }
  if (observer) observer(state);

  const Real dt = state.config.dt;
  while (state.time < t_end - 1e-12) {
    const Real remaining = t_end - state.time;
    step(state, std::min(dt, remaining));
    const bool last = state.time >= t_end - 1e-12;
    if (observer &&
        (last || state.steps_taken % state.config.observer_stride == 0)) {
      observer(state);
    }
  }
}

VectorField current_velocity(const SimState& state) {
  const Real t_abs = state.config.time_offset + state.time;
  const FilterParams fp =
      (state.config.frame == Frame::Scaled)
          ? make_scaled_filter(state.config.alpha, t_abs)
          : make_physical_filter(state.config.alpha);
  return filtered_velocity(state.w, fp);
}

ScalarField rhs_scaled(const ScalarField& w, Real tau, Real alpha,
                       SystemKind system, const LinearContext& context,
                       bool dealias_products) {
  if (w.frame() != Frame::Scaled) {
    throw std::invalid_argument("rhs_scaled: field must be scaled-frame");
  }
  if (tau < 0.0) {
    throw std::invalid_argument("rhs_scaled: tau must be >= 0");
  }
  if (alpha < 0.0) {
    throw std::invalid_argument("rhs_scaled: alpha must be >= 0");
  }

  SimConfig cfg;
  cfg.n = w.grid().n();
  cfg.half_width = w.grid().half_width();
  cfg.frame = Frame::Scaled;
  cfg.system = system;
  cfg.alpha = alpha;
  cfg.dealias_products = dealias_products;
  cfg.linear = context;

  const auto tables = build_tables(w.grid(), cfg, 0.0);
  Eigen::ArrayXXcd rhs = explicit_tendency_hat(w.grid(), cfg, *tables,
                                               w.spec(), tau, nullptr,
                                               nullptr);
  // Stiff generator part, exact in spectral variables.
  rhs += w.spec() * (1.0 - tables->ksq);

  ScalarField out(w.grid(), w.frame());
  out.set_spec(rhs);
  return out;
}

}  // namespace vche
