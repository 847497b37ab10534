#pragma once

/// Time integration of the filtered vorticity dynamics, in both frames, for
/// the full nonlinear system and the three reduced systems built around the
/// slow modes (linearization at the Gaussian, and the two moment-free
/// difference systems).
///
/// One pseudo-spectral scheme drives everything: the stiff part of the
/// generator (Laplacian, plus the unit eigenvalue shift in the scaled frame)
/// is applied exactly through integrating-factor multipliers, and the
/// remaining terms (scaled-frame drift, advection, closed-form couplings)
/// are advanced with the three-stage strong-stability-preserving Runge-Kutta
/// method. Advection is assembled in divergence form against
/// divergence-free velocities, so every transported term is exactly
/// mean-free in spectral space and mass conservation holds to roundoff.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "vche/field.hpp"
#include "vche/grid.hpp"
#include "vche/norms.hpp"

namespace vche {

/// Which right-hand side the stepper integrates.
///
///  Full         w_t = L w - omega.grad w            (scaled frame), or
///               v_t = Laplacian v - u.grad v        (physical frame)
///  Linearized   psi_t = L psi - a eta.grad Gamma - a vG.grad psi,
///               eta the filtered velocity of psi
///  Difference1  f_t = L f - (a vG + phi).grad f - a phi.grad Gamma
///  Difference2  Difference1 plus the Lambda couplings and the closed-form
///               forcing; see rhs_scaled for the exact terms
///
/// The reduced systems are self-contained: their background fields (Gamma,
/// Lambda_i, vG, vF_i) are closed-form with coefficients frozen in
/// LinearContext, so evolving them needs no companion solve.
enum class SystemKind { Full, Linearized, Difference1, Difference2 };

/// Frozen slow-mode coefficients of the decomposition the reduced systems
/// are written against: a is the mass coefficient on Gamma, b1/b2 the
/// first-moment coefficients on Lambda_i (used by Difference2 only).
struct LinearContext {
  Real a = 0.0;
  Real b1 = 0.0;
  Real b2 = 0.0;
};

struct SimConfig {
  int n = 256;
  Real half_width = 12.0;
  Frame frame = Frame::Scaled;
  SystemKind system = SystemKind::Full;
  Real alpha = 0.0;
  Real dt = 0.004;
  Real t_end = 1.0;
  // 2/3-rule projection of the assembled tendency each stage. On by
  // default; switching it off is only for aliasing experiments.
  bool dealias_products = true;
  LinearContext linear;
  // Shift added to the state clock wherever a time-dependent coefficient
  // is evaluated (filter coefficient, Gamma/Lambda assembly, decay
  // prefactors). Running with offset n from a state clock starting at 0
  // is the shifted system used by the invariant-manifold construction.
  Real time_offset = 0.0;
  // Steps between observer callbacks in run_to (the final state is always
  // reported).
  int observer_stride = 25;
};

struct StepperTables;  // integrating factors + closed-form caches (internal)

struct SimState {
  SimConfig config;
  // State clock. The absolute coefficient time is time + config.time_offset.
  Real time = 0.0;
  long steps_taken = 0;
  ScalarField w;
  // moments(w) after every accepted step (index k = step k+1).
  std::vector<Moments> moment_history;
  // Advective stability bound recorded at construction from the initial
  // velocity; step() re-derives the current bound every step and rejects
  // the step if dt exceeds it.
  Real cfl_bound = 0.0;
  // One-shot diagnostics (boundary-tail mass, ...) appended during
  // stepping; report writers surface them.
  std::vector<std::string> warnings;
  std::shared_ptr<const StepperTables> tables;
};

/// Validates the configuration against w0 (grid match, frame match, reduced
/// systems only in the scaled frame, dt within the initial stability bound),
/// dealiases the initial data when dealias_products is set, and records the
/// stability bound. Throws std::invalid_argument on any violation.
SimState make_state(const SimConfig& config, const ScalarField& w0);

/// Instantaneous scaled-frame tendency of `system` at absolute time tau.
/// The generator part (Laplacian + drift + identity) is evaluated
/// spectrally with the drift product taken in physical space; every
/// transported term is assembled in divergence form and the assembled
/// tendency is dealiased when dealias_products is set.
///
/// Difference2 integrates
///   f_t = L f - (a vG + V + phi).grad f - a phi.grad Gamma
///         - e^{-tau/2} phi.grad(b1 Lambda_1 + b2 Lambda_2)
///         - e^{-tau}  (b1 vF_1 + b2 vF_2).grad(b1 Lambda_1 + b2 Lambda_2),
/// with phi the filtered velocity of f and V = e^{-tau/2}(b1 vF_1 + b2 vF_2);
/// all four i,j products of the closed-form forcing carry the same sign.
ScalarField rhs_scaled(const ScalarField& w, Real tau, Real alpha,
                       SystemKind system, const LinearContext& context = {},
                       bool dealias_products = true);

/// Advance one step of length config.dt (or an explicit dt for the final
/// partial step of a run). Applies the integrating-factor SSP-RK3 update,
/// re-pins the mean to its initial value in the scaled frame (all four
/// systems conserve mass exactly; the pin removes the O(dt^4)-per-step
/// integrating-factor residue on the neutral mode), appends to the moment
/// history, and throws std::runtime_error on a stability-bound violation or
/// a non-finite state.
void step(SimState& state);
void step(SimState& state, Real dt);

using Observer = std::function<void(const SimState&)>;

/// Step from state.time to t_end (final partial step if dt does not divide
/// the interval). The observer, when given, sees the entry state, every
/// observer_stride-th step, and the final state. t_end == state.time is a
/// no-op apart from the entry callback.
void run_to(SimState& state, Real t_end, const Observer& observer = {});

/// Filtered velocity of the current state at the current absolute time
/// (filter coefficient alpha^2 e^{-tau} in the scaled frame, alpha^2 in the
/// physical frame).
VectorField current_velocity(const SimState& state);

/// Options for the mild-solution solver (physical frame).
struct PicardOptions {
  int nodes = 8;              // Gauss-Legendre points on [0, t] (8 or 16)
  Real alpha = 0.0;           // filter length of the advecting velocity
  bool zero_velocity = false; // drop the nonlinearity: exact heat flow
  bool dealias_products = true;
};

/// Fixed-point iteration on the Duhamel form
///   v(s) = e^{s Laplacian} v0 - int_0^s grad Phi(s - r) * (u v)(r) dr,
/// with the convolution realized spectrally as i k e^{-|k|^2 (s - r)} on the
/// product, the iterate held at Gauss-Legendre nodes of [0, t], and inner
/// integrals evaluated by the same rule through degree-(nodes-1) Lagrange
/// interpolation of the product in time. Returns v(t).
///
/// If iterate_gaps is non-null it receives the successive sup-over-nodes L2
/// distances between iterates. Throws std::runtime_error (message carries
/// the distance series) if the iteration diverges, std::invalid_argument
/// for a scaled-frame input, t < 0, or iterations < 1.
ScalarField picard_mild_solve(const ScalarField& v0, Real t, int iterations,
                              const PicardOptions& options = {},
                              std::vector<Real>* iterate_gaps = nullptr);

}  // namespace vche
