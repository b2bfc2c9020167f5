#pragma once

#include <cstddef>
#include <string>

#include "ymflow/forms.hpp"

namespace ymflow {

// Snapshot container: one JSON header line, then the raw little-endian
// 64-bit float payload in storage order (direction sets x<y<z, within a set
// k-j-i row-major with i fastest). The header records a SHA-256 of the
// payload; loading verifies it, so truncation and corruption are detected.
struct SnapshotMeta {
  int schema_version = 1;
  GroupKind group = GroupKind::U1;
  int n = 0;
  double L = 0.0;
  double h = 0.0;
  std::string bc;  // boundary-condition tag, echoed verbatim
  double t = 0.0;
  int degree = 1;
  std::string layout;
  std::size_t value_count = 0;
  std::string payload_sha256;
};

std::string sha256_hex(const void* data, std::size_t len);

void save_snapshot(const std::string& path, const Cochain& field, double t,
                   const std::string& bc_tag);

SnapshotMeta read_snapshot_meta(const std::string& path);

// Header incompatibilities (version, sizes, mesh mismatch) raise
// SchemaMismatch; payload hash or length problems raise ChecksumMismatch.
Cochain load_snapshot(const std::string& path, const CubeMesh& mesh,
                      SnapshotMeta* meta_out = nullptr);

}  // namespace ymflow
