#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "ymflow/errors.hpp"

namespace ymflow {

// Regular grid on the cube [0,L]^3 with n cells per axis, spacing h = L/n.
// Cells of degree p are axis-aligned p-dimensional grid cells, identified by
// a direction set (which axes they span, as a 3-bit mask) and an anchor
// multi-index (i,j,k) at their lowest corner. Storage order is degree-major:
// direction sets in increasing mask order (x<y<z lexicographic), within a set
// k-j-i row-major with i fastest.

enum class Axis : int { X = 0, Y = 1, Z = 2 };

struct CellId {
  int degree = 0;
  int dirs = 0;  // bitmask, bit a set iff the cell spans axis a
  int i = 0, j = 0, k = 0;
};

// Face of the cube boundary: axis plus side (false = low face, true = high).
struct BoundaryFace {
  int axis = 0;
  bool high = false;
};

struct BoundaryClass {
  bool interior = true;
  // Faces at which the cell is contained in the face (carries a tangential
  // component) resp. touches the face while spanning its axis (normal).
  std::vector<BoundaryFace> tangential;
  std::vector<BoundaryFace> normal;
};

// Direction sets per degree, in storage order.
inline const std::array<std::vector<int>, 4>& direction_sets() {
  static const std::array<std::vector<int>, 4> sets = {
      std::vector<int>{0}, {1, 2, 4}, {3, 5, 6}, {7}};
  return sets;
}

class CubeMesh {
 public:
  CubeMesh(int n, double L = 1.0);

  int n() const { return n_; }
  double L() const { return L_; }
  double h() const { return h_; }

  std::size_t cell_count(int degree) const;
  std::size_t cell_count(int degree, int set) const;
  int set_count(int degree) const;
  int set_mask(int degree, int set) const;

  // Extents of the anchor index grid for a direction set: n along spanned
  // axes, n+1 along transverse axes.
  std::array<int, 3> extents(int degree, int set) const;

  std::size_t cell_index(const CellId& c) const;  // throws InvalidCell / InvalidDegree
  CellId cell_id(int degree, std::size_t index) const;

  // Flat index within one direction set block.
  std::size_t set_index(int degree, int set, int i, int j, int k) const {
    const auto& e = ext_[degree][set];
    return (static_cast<std::size_t>(k) * e[1] + j) * e[0] + i;
  }
  std::size_t set_offset(int degree, int set) const { return offset_[degree][set]; }

  BoundaryClass classify(const CellId& c) const;

  // Precomputed per-cell flags: cell carries a tangential (resp. normal)
  // component at some boundary face.
  bool tangential_at_boundary(int degree, std::size_t index) const {
    return (flags_[degree][index] & 1) != 0;
  }
  bool normal_at_boundary(int degree, std::size_t index) const {
    return (flags_[degree][index] & 2) != 0;
  }

  // Vertex helpers (degree 0 cells, extents (n+1)^3).
  std::size_t vertex_index(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * (n_ + 1) + j) * (n_ + 1) + i;
  }
  std::size_t vertex_count() const { return cell_count(0); }

 private:
  int n_;
  double L_, h_;
  std::array<std::array<std::array<int, 3>, 3>, 4> ext_{};     // [degree][set]
  std::array<std::array<std::size_t, 4>, 4> offset_{};         // prefix sums
  std::array<std::vector<std::uint8_t>, 4> flags_;             // bit0 tan, bit1 norm
};

// Signed boundary incidence: one (p+1)-cell together with its 2(p+1) faces.
struct IncidenceEntry {
  std::size_t cell;  // index of the (p+1)-cell
  std::size_t face;  // index of the p-cell
  int sign;          // +1 or -1
};

// Enumerates the signed boundary relation between (p+1)-cells and p-cells.
std::vector<IncidenceEntry> incidence(const CubeMesh& mesh, int p);

CubeMesh build_mesh(int n, double L = 1.0);

}  // namespace ymflow
