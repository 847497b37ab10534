#pragma once

/// The experiment catalog behind the command-line runner.
///
/// Each experiment evolves a concrete configuration of the filtered
/// vorticity dynamics (or drives the invariant-analysis machinery), fits
/// the advertised decay rates, and grades itself into pass/fail verdict
/// rows with pinned tolerances:
///
///  smoothing-L1Lp      physical-frame run from peaked data; sup- and
///                      L2-norm power-law rates of the vorticity
///  first-order-decay   scaled-frame run; exponential rate of the distance
///                      to the mass carrier in the quadratic-weight norm
///  second-order-decay  scaled-frame run; rate of the distance to the
///                      mass + first-moment carriers in the cubic-weight
///                      norm
///  invariants          conservation laws of the run (mass, moment decay
///                      law) and the smoothing-filter identities on a
///                      random field battery
///  lp-verification     semiorbit decay, fixed-point residual, forcing
///                      decay, and contraction certificates of the
///                      invariant-analysis machinery
///
/// Unknown config keys are rejected with the full list of keys the
/// experiment accepts; every consulted key (defaults included) is echoed
/// into the report.

#include <string>
#include <vector>

#include "vche/config.hpp"
#include "vche/report.hpp"

namespace vche {

/// Catalog, in fixed order.
const std::vector<std::string>& experiment_names();

/// Run one experiment. Throws std::invalid_argument for an unknown name
/// (the message lists the valid names) or an invalid configuration (the
/// message names the offending key). When the config carries a non-empty
/// `out_dir`, the experiment writes its final field state to
/// `<out_dir>/<name>-final.snap`.
DecayReport run_experiment(const std::string& name, const ConfigMap& config);

/// Parallelism cap for the random-field batteries: the value of the
/// VCHE2D_THREADS environment variable when it parses as a positive
/// integer, 1 when it is set but malformed, and the hardware concurrency
/// when it is unset. Always at least 1.
int thread_cap();

}  // namespace vche
