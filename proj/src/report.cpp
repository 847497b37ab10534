#include "vche/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vche {

bool all_passed(const DecayReport& report) {
  for (const VerdictRow& row : report.verdicts) {
    if (!row.pass) return false;
  }
  return true;
}

std::string format_real(Real v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string render_series_csv(const Series& series) {
  std::ostringstream out;
  out << series.time_label;
  for (const SeriesColumn& col : series.columns) out << ',' << col.name;
  out << '\n';
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    out << format_real(series.times[i]);
    for (const SeriesColumn& col : series.columns) {
      out << ',' << format_real(col.values[i]);
    }
    out << '\n';
  }
  return out.str();
}

std::string render_report(const DecayReport& report) {
  std::ostringstream out;
  out << "experiment: " << report.experiment << "\n\n";

  out << "config:\n";
  for (const auto& [key, value] : report.config_echo) {
    out << "  " << key << " = " << value << "\n";
  }
  out << "\n";

  out << "fitted exponents:\n";
  if (report.exponents.empty()) {
    out << "  (none)\n";
  }
  for (const FittedExponent& e : report.exponents) {
    out << "  " << e.name << ": slope " << format_real(e.slope)
        << " over window [" << format_real(e.window_lo) << ", "
        << format_real(e.window_hi) << "], max log-residual "
        << format_real(e.residual) << "\n";
  }
  out << "\n";

  out << "verdicts:\n";
  if (report.verdicts.empty()) {
    out << "  (none)\n";
  }
  for (const VerdictRow& row : report.verdicts) {
    out << "  [" << (row.pass ? "PASS" : "FAIL") << "] " << row.name << ": "
        << row.detail << "\n";
  }
  out << "\n";

  out << "warnings:\n";
  if (report.warnings.empty()) {
    out << "  (none)\n";
  }
  for (const std::string& w : report.warnings) {
    out << "  " << w << "\n";
  }
  out << "\n";

  out << "series: " << report.series.times.size() << " rows, columns "
      << report.series.time_label;
  for (const SeriesColumn& col : report.series.columns) {
    out << ", " << col.name;
  }
  out << "\n";
  return out.str();
}

void write_report_files(const DecayReport& report,
                        const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto write_file = [&](const std::string& name,
                              const std::string& content) {
    const std::string path = out_dir + "/" + name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot create report file '" + path + "'");
    }
    out << content;
    if (!out) {
      throw std::runtime_error("failed writing report file '" + path + "'");
    }
  };
  write_file(report.experiment + "-report.txt", render_report(report));
  write_file(report.experiment + "-series.csv",
             render_series_csv(report.series));
}

}  // namespace vche
