#pragma once

/// Experiment reports: time series, fitted exponents, verdicts, warnings.
///
/// A report is pure data plus deterministic renderers. The text body and
/// the CSV are functions of the report alone — no timestamps, hostnames,
/// or pointers — so identical configurations render byte-identical output.

#include <string>
#include <utility>
#include <vector>

#include "vche/field.hpp"

namespace vche {

struct SeriesColumn {
  std::string name;
  std::vector<Real> values;
};

/// One shared time axis plus any number of named columns of equal length.
struct Series {
  std::string time_label = "time";
  std::vector<Real> times;
  std::vector<SeriesColumn> columns;
};

/// A fitted decay exponent together with the window it was fitted on and
/// the fit's max log-deviation, so every quoted rate carries its own
/// quality certificate.
struct FittedExponent {
  std::string name;
  Real window_lo = 0.0;
  Real window_hi = 0.0;
  Real slope = 0.0;
  Real residual = 0.0;
};

struct VerdictRow {
  std::string name;
  std::string detail;
  bool pass = false;
};

struct DecayReport {
  std::string experiment;
  // Every key the experiment consulted, defaults included, sorted by key.
  std::vector<std::pair<std::string, std::string>> config_echo;
  Series series;
  std::vector<FittedExponent> exponents;
  std::vector<VerdictRow> verdicts;
  std::vector<std::string> warnings;
};

bool all_passed(const DecayReport& report);

/// Shortest round-trippable decimal rendering (%.17g).
std::string format_real(Real v);

/// CSV with a header row; every number rendered by format_real.
std::string render_series_csv(const Series& series);

/// Human-readable report body. Deterministic; contains no timestamps.
std::string render_report(const DecayReport& report);

/// Write `<experiment>-report.txt` and `<experiment>-series.csv` into
/// out_dir (created if needed). Throws std::runtime_error on I/O failure.
void write_report_files(const DecayReport& report, const std::string& out_dir);

}  // namespace vche
