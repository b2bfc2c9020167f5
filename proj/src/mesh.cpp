#include "ymflow/mesh.hpp"

#include <string>

namespace ymflow {

CubeMesh::CubeMesh(int n, double L) : n_(n), L_(L), h_(L / n) {
  if (n < 2) throw InvalidParameter("mesh requires n >= 2, got n = " + std::to_string(n));
  if (!(L > 0.0)) throw InvalidParameter("mesh requires L > 0");

  for (int p = 0; p <= 3; ++p) {
    const auto& sets = direction_sets()[p];
    std::size_t off = 0;
    for (int s = 0; s < static_cast<int>(sets.size()); ++s) {
      offset_[p][s] = off;
      std::size_t cnt = 1;
      for (int a = 0; a < 3; ++a) {
        ext_[p][s][a] = (sets[s] >> a & 1) ? n_ : n_ + 1;
        cnt *= ext_[p][s][a];
      }
      off += cnt;
    }
    offset_[p][sets.size()] = off;
    flags_[p].assign(off, 0);
  }

  // Classification flags. A p-cell spans axis a iff a is in its direction
  // set; along spanned axes it occupies [c, c+1], along transverse axes it
  // sits at coordinate c. Contained in a face => tangential there; touching
  // a face while spanning its axis => normal there.
  for (int p = 0; p <= 3; ++p) {
    const auto& sets = direction_sets()[p];
    for (int s = 0; s < static_cast<int>(sets.size()); ++s) {
      const int mask = sets[s];
      const auto e = ext_[p][s];
      std::size_t idx = offset_[p][s];
      for (int k = 0; k < e[2]; ++k)
        for (int j = 0; j < e[1]; ++j)
          for (int i = 0; i < e[0]; ++i, ++idx) {
            const int c[3] = {i, j, k};
            std::uint8_t f = 0;
            for (int a = 0; a < 3; ++a) {
              if (mask >> a & 1) {
                if (c[a] == 0 || c[a] + 1 == n_) f |= 2;
              } else {
                if (c[a] == 0 || c[a] == n_) f |= 1;
              }
            }
            flags_[p][idx] = f;
          }
    }
  }
}

std::size_t CubeMesh::cell_count(int degree) const {
  if (degree < 0 || degree > 3) throw InvalidDegree("degree must be in [0,3]");
  return offset_[degree][direction_sets()[degree].size()];
}

std::size_t CubeMesh::cell_count(int degree, int set) const {
  return offset_[degree][set + 1] - offset_[degree][set];
}

int CubeMesh::set_count(int degree) const {
  if (degree < 0 || degree > 3) throw InvalidDegree("degree must be in [0,3]");
  return static_cast<int>(direction_sets()[degree].size());
}

int CubeMesh::set_mask(int degree, int set) const { return direction_sets()[degree][set]; }

std::array<int, 3> CubeMesh::extents(int degree, int set) const {
  if (degree < 0 || degree > 3) throw InvalidDegree("degree must be in [0,3]");
  return {ext_[degree][set][0], ext_[degree][set][1], ext_[degree][set][2]};
}

std::size_t CubeMesh::cell_index(const CellId& c) const {
  if (c.degree < 0 || c.degree > 3) throw InvalidDegree("degree must be in [0,3]");
  const auto& sets = direction_sets()[c.degree];
  int s = -1;
  for (int t = 0; t < static_cast<int>(sets.size()); ++t)
    if (sets[t] == c.dirs) s = t;
  if (s < 0) throw InvalidCell("direction set does not match degree");
  const auto e = ext_[c.degree][s];
  if (c.i < 0 || c.i >= e[0] || c.j < 0 || c.j >= e[1] || c.k < 0 || c.k >= e[2])
    throw InvalidCell("anchor index out of range");
  return offset_[c.degree][s] + set_index(c.degree, s, c.i, c.j, c.k);
}

CellId CubeMesh::cell_id(int degree, std::size_t index) const {
  if (degree < 0 || degree > 3) throw InvalidDegree("degree must be in [0,3]");
  if (index >= cell_count(degree)) throw InvalidCell("cell index out of range");
  const auto& sets = direction_sets()[degree];
  int s = 0;
  while (index >= offset_[degree][s + 1]) ++s;
  std::size_t r = index - offset_[degree][s];
  const auto e = ext_[degree][s];
  CellId c;
  c.degree = degree;
  c.dirs = sets[s];
  c.i = static_cast<int>(r % e[0]);
  c.j = static_cast<int>((r / e[0]) % e[1]);
  c.k = static_cast<int>(r / (static_cast<std::size_t>(e[0]) * e[1]));
  return c;
}

BoundaryClass CubeMesh::classify(const CellId& c) const {
  cell_index(c);  // validate
  BoundaryClass bc;
  const int coord[3] = {c.i, c.j, c.k};
  for (int a = 0; a < 3; ++a) {
    const bool spans = (c.dirs >> a & 1) != 0;
    if (spans) {
      if (coord[a] == 0) bc.normal.push_back({a, false});
      if (coord[a] + 1 == n_) bc.normal.push_back({a, true});
    } else {
      if (coord[a] == 0) bc.tangential.push_back({a, false});
      if (coord[a] == n_) bc.tangential.push_back({a, true});
    }
  }
  bc.interior = bc.tangential.empty() && bc.normal.empty();
  return bc;
}

std::vector<IncidenceEntry> incidence(const CubeMesh& mesh, int p) {
  if (p < 0 || p > 2) throw InvalidDegree("incidence defined for p in [0,2]");
  std::vector<IncidenceEntry> out;
  out.reserve(mesh.cell_count(p + 1) * 2 * (p + 1));
  const auto& hi_sets = direction_sets()[p + 1];
  const auto& lo_sets = direction_sets()[p];
  for (int s = 0; s < static_cast<int>(hi_sets.size()); ++s) {
    const int mask = hi_sets[s];
    const auto e = mesh.extents(p + 1, s);
    std::size_t idx = mesh.set_offset(p + 1, s);
    for (int k = 0; k < e[2]; ++k)
      for (int j = 0; j < e[1]; ++j)
        for (int i = 0; i < e[0]; ++i, ++idx) {
          int m = 0;
          for (int a = 0; a < 3; ++a) {
            if (!(mask >> a & 1)) continue;
            const int sub = mask & ~(1 << a);
            int t = 0;
            while (lo_sets[t] != sub) ++t;
            const int sign = (m % 2 == 0) ? 1 : -1;
            int fi = i, fj = j, fk = k;
            std::size_t near_idx =
                mesh.set_offset(p, t) + mesh.set_index(p, t, fi, fj, fk);
            if (a == 0) ++fi;
            if (a == 1) ++fj;
            if (a == 2) ++fk;
            std::size_t far_idx =
                mesh.set_offset(p, t) + mesh.set_index(p, t, fi, fj, fk);
            out.push_back({idx, far_idx, sign});
            out.push_back({idx, near_idx, -sign});
            ++m;
          }
        }
  }
  return out;
}

CubeMesh build_mesh(int n, double L) { return CubeMesh(n, L); }

}  // namespace ymflow
