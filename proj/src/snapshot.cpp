#include "ymflow/snapshot.hpp"

#include <openssl/evp.h>

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

#include <json.hpp>

#include "ymflow/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "snapshot payload format assumes a little-endian host");

namespace ymflow {

using json = nlohmann::json;

std::string sha256_hex(const void* data, std::size_t len) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int mdlen = 0;
  if (EVP_Digest(data, len, md, &mdlen, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 digest failed");
  char buf[2 * EVP_MAX_MD_SIZE + 1];
  for (unsigned i = 0; i < mdlen; ++i) std::snprintf(buf + 2 * i, 3, "%02x", md[i]);
  return std::string(buf, 2 * mdlen);
}

void save_snapshot(const std::string& path, const Cochain& field, double t,
                   const std::string& bc_tag) {
  const CubeMesh& mesh = field.mesh();
  json j;
  j["schema_version"] = 1;
  j["group"] = group_name(field.kind());
  j["n"] = mesh.n();
  j["L"] = mesh.L();
  j["h"] = mesh.h();
  j["bc"] = bc_tag;
  j["t"] = t;
  j["degree"] = field.degree();
  j["layout"] = "set-major,k-j-i";
  j["value_count"] = field.value_count();
  j["payload_sha256"] =
      sha256_hex(field.data(), field.value_count() * sizeof(double));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open snapshot file for writing: " + path);
  out << j.dump() << '\n';
  out.write(reinterpret_cast<const char*>(field.data()),
            static_cast<std::streamsize>(field.value_count() * sizeof(double)));
  if (!out) throw std::runtime_error("snapshot write failed: " + path);
}

namespace {

SnapshotMeta parse_header(const std::string& line, const std::string& path) {
  json j;
  try {
    j = json::parse(line);
  } catch (const std::exception& e) {
    throw SchemaMismatch("snapshot header is not valid JSON (" + path + "): " + e.what());
  }
  SnapshotMeta m;
  try {
    m.schema_version = j.at("schema_version").get<int>();
    const std::string g = j.at("group").get<std::string>();
    if (g == group_name(GroupKind::U1))
      m.group = GroupKind::U1;
    else if (g == group_name(GroupKind::SU2))
      m.group = GroupKind::SU2;
    else
      throw SchemaMismatch("unknown group tag: " + g);
    m.n = j.at("n").get<int>();
    m.L = j.at("L").get<double>();
    m.h = j.at("h").get<double>();
    m.bc = j.at("bc").get<std::string>();
    m.t = j.at("t").get<double>();
    m.degree = j.at("degree").get<int>();
    m.layout = j.at("layout").get<std::string>();
    m.value_count = j.at("value_count").get<std::size_t>();
    m.payload_sha256 = j.at("payload_sha256").get<std::string>();
  } catch (const SchemaMismatch&) {
    throw;
  } catch (const std::exception& e) {
    throw SchemaMismatch("snapshot header misses required fields (" + path + "): " +
                         e.what());
  }
  if (m.schema_version != 1)
    throw SchemaMismatch("unsupported snapshot schema version " +
                         std::to_string(m.schema_version));
  return m;
}

}  // namespace

SnapshotMeta read_snapshot_meta(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaMismatch("cannot open snapshot file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw SchemaMismatch("snapshot has no header line: " + path);
  return parse_header(line, path);
}

Cochain load_snapshot(const std::string& path, const CubeMesh& mesh,
                      SnapshotMeta* meta_out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaMismatch("cannot open snapshot file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw SchemaMismatch("snapshot has no header line: " + path);
  const SnapshotMeta m = parse_header(line, path);
  if (m.n != mesh.n() || m.L != mesh.L())
    throw SchemaMismatch("snapshot mesh (n=" + std::to_string(m.n) +
                         ") does not match the target mesh (n=" +
                         std::to_string(mesh.n()) + ")");
  if (m.degree < 0 || m.degree > 3) throw SchemaMismatch("snapshot degree out of range");
  Cochain field(mesh, m.group, m.degree);
  if (m.value_count != field.value_count())
    throw SchemaMismatch("snapshot value_count does not match the mesh/degree");

  std::vector<char> payload(m.value_count * sizeof(double));
  in.read(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (static_cast<std::size_t>(in.gcount()) != payload.size())
    throw ChecksumMismatch("snapshot payload is truncated: " + path);
  const std::string got = sha256_hex(payload.data(), payload.size());
  if (got != m.payload_sha256)
    throw ChecksumMismatch("snapshot payload hash mismatch: " + path);
  std::memcpy(field.data(), payload.data(), payload.size());
  if (meta_out) *meta_out = m;
  return field;
}

}  // namespace ymflow
