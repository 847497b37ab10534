#pragma once

/// Discrete invariant-analysis machinery built on the difference systems:
/// unit-interval shifted flows, their one-step remainder and forcing maps,
/// weighted sequence norms, the discrete variation-of-constants residual
/// that certifies a computed sequence solves the fixed-point form of the
/// dynamics, and empirical Lipschitz/contraction estimates for that form.
///
/// Everything here works with moment-free difference fields: the mass mode
/// (and, in the second-order setting, the two first-moment modes) is
/// carried by closed-form profiles with frozen coefficients, and the flows
/// evolve what remains. The slow-mode span is {G} in the first-order
/// setting (m = 2) and {G, F_1, F_2} in the second-order one (m = 3),
/// with one-step decay factors 1 and e^{-1/2} respectively under the exact
/// semigroup of L.

#include <vector>

#include "vche/eigenbasis.hpp"
#include "vche/field.hpp"
#include "vche/grid.hpp"

namespace vche {

/// Frozen data of one invariant-analysis run.
///
///   m      2: first-order (mass-only) splitting, difference1 dynamics;
///          3: second-order (mass + first moments), difference2 dynamics.
///   mu     decay-rate exponent of the weighted sequence space; admissible
///          range (0, 1/2) for m = 2 and (1/2, 1) for m = 3 (strict), the
///          window between the slow-mode rates bounding each splitting.
///   alpha  filter length of the underlying dynamics.
///   base   the full initial vorticity w0 the difference fields refer to.
///   coeffs slow-mode coefficients of base (a = mass, b_i = -moment_i).
///   r0     data-size bound in force: |base|_{L2(m)} <= r0.
///   dt     step size used by every flow launched from this context.
struct LPContext {
  int m = 2;
  Real mu = 0.25;
  Real alpha = 0.0;
  Real r0 = 0.01;
  Real dt = 1.0 / 256.0;
  ScalarField base;
  EigenCoefficients coeffs;
};

/// Validating factory: checks m, the mu window for that m, alpha >= 0,
/// r0 > 0, dt > 0, a scaled-frame base with |base|_{L2(m)} <= r0, and
/// fills coeffs from the moment projection of base. Throws
/// std::invalid_argument on any violation.
LPContext make_lp_context(const ScalarField& w0, int m, Real mu, Real alpha,
                          Real r0, Real dt = 1.0 / 256.0);

/// A finite orbit segment {f_n : n = 0..N} of the unit-interval flow
/// together with the weight data its sequence norm uses. All entries live
/// on one grid.
struct SemiorbitSequence {
  std::vector<ScalarField> entries;
  Real mu = 0.0;
  int m = 2;
};

/// The difference field at time 0 for this context: base minus the
/// closed-form slow-mode carriers evaluated at time 0 (a Gamma for m = 2,
/// plus b_i Lambda_i for m = 3). Mass-free (and moment-free for m = 3) to
/// quadrature accuracy by construction.
ScalarField initial_difference(const LPContext& ctx);

/// Flow of the first-order difference system over the shifted unit
/// interval: advances f0 by tau in [0, 1] with every time-dependent
/// coefficient evaluated at n + sigma. Composing consecutive shifts
/// reproduces the unshifted flow. Requires |mass(f0)| <= 1e-10 (the flow
/// preserves it and the splitting assumes it); throws
/// std::invalid_argument on that, on tau outside [0, 1], or on n < 0;
/// stepper errors propagate.
ScalarField theta_flow(const ScalarField& f0, int n, Real tau,
                       const LPContext& ctx);

/// Same for the second-order difference system (m = 3 contexts only):
/// includes the decaying moment-carrier advection and the closed-form
/// forcing. Preconditions as theta_flow, plus first moments of f0 within
/// 1e-10 of zero.
ScalarField psi_flow(const ScalarField& f0, int n, Real tau,
                     const LPContext& ctx);

/// One-step remainder of the shifted flow against the exact semigroup:
///   m = 2:  R_n(f0) = theta_flow(f0, n, 1) - e^L f0,
///   m = 3:  R_n(f0) = psi_flow(f0, n, 1) - e^L f0 - forcing_S(n).
/// Vanishes at f0 = 0 (for m = 3 up to the quadrature difference between
/// the stepped and the closed-form forcing integral) and conserves the
/// zero mass of its input.
ScalarField remainder_R(const ScalarField& f0, int n, const LPContext& ctx);

/// State-independent part of the second-order one-step map: the
/// variation-of-constants integral over the shifted unit interval of the
/// closed-form forcing (the moment-carrier self-advection term, weight
/// e^{-(n+sigma)}), propagated to the interval end by the exact semigroup
/// and evaluated with an 8-point Gauss-Legendre rule. Decays at least
/// like e^{-n}. m = 3 contexts only; identically zero when b1 = b2 = 0.
ScalarField forcing_S(int n, const LPContext& ctx);

/// entries[0] = initial_difference(ctx); entries[k+1] = the unit-interval
/// flow of entries[k] at shift k (theta_flow for m = 2, psi_flow for
/// m = 3). length_N >= 0 is the largest index computed.
SemiorbitSequence compute_semiorbit(const LPContext& ctx, int length_N);

/// Weighted sequence norm sup_n e^{mu n} |f_n|_{L2}. Zero for an empty
/// sequence.
Real emu_norm(const SemiorbitSequence& seq);

struct LPResidual {
  /// max over n of the L2(m) distance between f_n and its discrete
  /// variation-of-constants representation.
  Real residual = 0.0;
  /// Estimated contribution of the truncated slow-mode tail sum, from the
  /// geometric decay of the last two observed one-step increments
  /// (infinite when no decay is observed).
  Real tail_bound = 0.0;
  /// Per-entry distances, index n = 0..N.
  std::vector<Real> per_entry;
};

/// Checks that seq solves the fixed-point form of the shifted dynamics:
/// for each n,
///   f_n ?= e^{nL} P2 f_0 - sum_{n <= j <= J} e^{(n-j-1)L} P1 D_j
///                        + sum_{0 <= j < n}  e^{(n-j-1)L} P2 D_j,
/// where D_j = f_{j+1} - e^L f_j is the one-step increment (the remainder
/// map, plus the forcing in the second-order setting), P1/P2 the
/// slow-mode projection and its complement. P1 terms are applied by the
/// closed-form decay factors of the span (including the inverse factors
/// the backward sum needs); P2 terms use the exact semigroup. The
/// sequence is extended beyond N by the flow itself so the forward sum
/// can be truncated at J >= N, and the truncated tail is estimated
/// geometrically. include_remainders = false drops every D_j term
/// (residual of the pure-semigroup representation). Throws
/// std::invalid_argument on an empty or mixed-grid sequence, a context/m
/// mismatch, or J < N.
LPResidual lp_residual(const SemiorbitSequence& seq, const LPContext& ctx,
                       int truncation_J, bool include_remainders = true);

/// One sampled Lipschitz ratio of the remainder map.
struct LipschitzSample {
  int n = 0;
  Real ratio = 0.0;
};

struct LipschitzReport {
  /// max sampled ratio |R_n(f) - R_n(g)|_m / |f - g|_m over pairs with
  /// |f|_m, |g|_m <= r0 and shifts n in {0..4}.
  Real lip = 0.0;
  /// Measured slow-mode and complement semigroup bounds (worst ratio over
  /// a 50-field sample and semigroup times 1..5, inflated 10%): c1 bounds
  /// |e^{jL} P1 g|_m / |g|_m against the span's decay factors, c2 bounds
  /// e^{j (m-1)/2} |e^{jL} P2 g|_m / |P2 g|_m.
  Real c1 = 0.0;
  Real c2 = 0.0;
  /// Left side of the contraction inequality assembled from c1, c2 and
  /// the mu-dependent geometric-series factors of the fixed-point map.
  Real contraction_lhs = 0.0;
  /// contraction_lhs < 1 / lip: the fixed-point map is a contraction on
  /// the weighted sequence space at this data size.
  bool contraction_ok = false;
  /// All sampled ratios, in sampling order.
  std::vector<LipschitzSample> samples;
};

/// Empirical Lipschitz constant of the remainder map near zero and the
/// resulting contraction check. Draws `samples` deterministic
/// mass/moment-free field pairs with L2(m) norms at most r0, flows each
/// through shifts n in {0..4}, and records the difference-quotient
/// ratios. Requires samples >= 20.
LipschitzReport estimate_lipschitz(const LPContext& ctx, int samples);

}  // namespace vche
