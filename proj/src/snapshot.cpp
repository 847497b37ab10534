#include "vche/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "vche/grid.hpp"
#include "vche/report.hpp"
#include "vche/spectral.hpp"

namespace vche {

namespace {

constexpr std::size_t kHeaderBytes = 4 + 4 + 4 + 8 + 8 + 1 + 8;

void append_u32(std::vector<unsigned char>& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    buf.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xffu));
  }
}

void append_f64(std::vector<unsigned char>& buf, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) {
    buf.push_back(static_cast<unsigned char>((bits >> (8 * i)) & 0xffu));
  }
}

std::uint32_t read_u32(const std::vector<unsigned char>& buf,
                       std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(buf[at + i]) << (8 * i);
  }
  return v;
}

double read_f64(const std::vector<unsigned char>& buf, std::size_t at) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) {
    bits |= static_cast<std::uint64_t>(buf[at + i]) << (8 * i);
  }
  return std::bit_cast<double>(bits);
}

}  // namespace

void write_snapshot(const std::string& path, const Snapshot& snap) {
  const Grid& g = snap.field.grid();
  const int n = g.n();

  std::vector<unsigned char> buf;
  buf.reserve(kHeaderBytes + static_cast<std::size_t>(n) * n * 8);
  buf.push_back('V');
  buf.push_back('C');
  buf.push_back('H');
  buf.push_back('E');
  append_u32(buf, kSnapshotVersion);
  append_u32(buf, static_cast<std::uint32_t>(n));
  append_f64(buf, g.half_width());
  append_f64(buf, snap.alpha);
  buf.push_back(snap.field.frame() == Frame::Physical ? 0u : 1u);
  append_f64(buf, snap.time);
  const Eigen::ArrayXXd& v = snap.field.values();
  for (int i2 = 0; i2 < n; ++i2) {
    for (int i1 = 0; i1 < n; ++i1) {
      append_f64(buf, v(i1, i2));
    }
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot create snapshot file '" + path + "'");
  }
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size()));
  if (!out) {
    throw std::runtime_error("failed writing snapshot file '" + path + "'");
  }
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open snapshot file '" + path + "'");
  }
  std::vector<unsigned char> buf(
      (std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  if (buf.size() < kHeaderBytes || buf[0] != 'V' || buf[1] != 'C' ||
      buf[2] != 'H' || buf[3] != 'E') {
    throw std::runtime_error("'" + path +
                             "' is not a field snapshot (bad magic)");
  }
  const std::uint32_t version = read_u32(buf, 4);
  if (version != kSnapshotVersion) {
    throw std::runtime_error("snapshot '" + path + "' has version " +
                             std::to_string(version) + "; expected " +
                             std::to_string(kSnapshotVersion));
  }
  const std::uint32_t n = read_u32(buf, 8);
  const double half_width = read_f64(buf, 12);
  const double alpha = read_f64(buf, 20);
  const unsigned char frame_byte = buf[28];
  const double time = read_f64(buf, 29);
  if (frame_byte > 1) {
    throw std::runtime_error("snapshot '" + path + "' has bad frame byte");
  }
  const std::size_t expected =
      kHeaderBytes + static_cast<std::size_t>(n) * n * 8;
  if (buf.size() != expected) {
    throw std::runtime_error("snapshot '" + path + "' is truncated (" +
                             std::to_string(buf.size()) + " bytes; expected " +
                             std::to_string(expected) + ")");
  }

  Grid g = make_grid(static_cast<int>(n), half_width);
  Eigen::ArrayXXd values(n, n);
  std::size_t at = kHeaderBytes;
  for (std::uint32_t i2 = 0; i2 < n; ++i2) {
    for (std::uint32_t i1 = 0; i1 < n; ++i1) {
      values(i1, i2) = read_f64(buf, at);
      at += 8;
    }
  }
  ScalarField field(g, frame_byte == 0 ? Frame::Physical : Frame::Scaled,
                    std::move(values));
  return Snapshot{std::move(field), alpha, time};
}

std::string describe_snapshot(const Snapshot& snap) {
  const Grid& g = snap.field.grid();
  std::ostringstream out;
  out << "n          = " << g.n() << "\n";
  out << "half_width = " << format_real(g.half_width()) << "\n";
  out << "alpha      = " << format_real(snap.alpha) << "\n";
  out << "frame      = "
      << (snap.field.frame() == Frame::Physical ? "physical" : "scaled")
      << "\n";
  out << "time       = " << format_real(snap.time) << "\n";
  out << "min        = " << format_real(snap.field.values().minCoeff())
      << "\n";
  out << "max        = " << format_real(snap.field.values().maxCoeff())
      << "\n";
  out << "mass       = " << format_real(integrate(snap.field)) << "\n";
  return out.str();
}

}  // namespace vche
