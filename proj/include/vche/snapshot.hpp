#pragma once

/// Byte-exact field snapshot files.
///
/// Layout (offsets in bytes, all integers and floats little-endian):
///   0   magic "VCHE" (4 bytes)
///   4   format version, u32
///   8   grid points per axis n, u32
///   12  half_width, f64
///   20  filter length alpha, f64
///   28  frame, u8 (0 physical, 1 scaled)
///   29  time (t or tau per frame), f64
///   37  n^2 field values, f64, row-major with the x2 index outer
///       (value index i2*n + i1)
///
/// The writer emits this layout byte for byte on every platform, so two
/// snapshots of the same state are identical files and reruns can be
/// compared with cmp(1).

#include <cstdint>
#include <string>

#include "vche/field.hpp"

namespace vche {

inline constexpr std::uint32_t kSnapshotVersion = 1;

struct Snapshot {
  ScalarField field;
  Real alpha = 0.0;
  Real time = 0.0;
};

/// Write `snap` to `path`, overwriting. Throws std::runtime_error when the
/// file cannot be created or written.
void write_snapshot(const std::string& path, const Snapshot& snap);

/// Read a snapshot back. Throws std::runtime_error on I/O failure, bad
/// magic, an unsupported version, a malformed header, or a size mismatch.
Snapshot read_snapshot(const std::string& path);

/// Deterministic text description (header fields plus simple field
/// statistics) used by the snapshot-dump command.
std::string describe_snapshot(const Snapshot& snap);

}  // namespace vche
