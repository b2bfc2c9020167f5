#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "ymflow/algebra.hpp"
#include "ymflow/mesh.hpp"

namespace ymflow {

enum class BcKind : std::uint8_t { DirichletTan0 = 0, NeumannNorm0 = 1, None = 2 };

inline const char* bc_kind_name(BcKind b) {
  switch (b) {
    case BcKind::DirichletTan0: return "dirichlet_tan0";
    case BcKind::NeumannNorm0: return "neumann_norm0";
    default: return "none";
  }
}

// Algebra-valued p-cochain. One algebra element per p-cell, stored cell-major
// in mesh order (direction sets x<y<z, then k-j-i row-major). Values represent
// pointwise field components sampled at cell centers, so the coboundary below
// carries a 1/h factor and acts as a finite-difference exterior derivative.
class Cochain {
 public:
  Cochain(const CubeMesh& mesh, GroupKind kind, int degree);

  const CubeMesh& mesh() const { return *mesh_; }
  GroupKind kind() const { return kind_; }
  int degree() const { return degree_; }
  int dim() const { return dim_; }
  std::size_t cells() const { return values_.size() / dim_; }

  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }
  std::size_t value_count() const { return values_.size(); }

  double& at(std::size_t cell, int comp) { return values_[cell * dim_ + comp]; }
  double at(std::size_t cell, int comp) const { return values_[cell * dim_ + comp]; }

  AlgElem get(std::size_t cell) const;
  void set(std::size_t cell, const AlgElem& v);

  void set_zero();
  Cochain& operator+=(const Cochain& o);
  Cochain& operator-=(const Cochain& o);
  Cochain& operator*=(double s);

 private:
  const CubeMesh* mesh_;
  GroupKind kind_;
  int degree_;
  int dim_;
  std::vector<double> values_;
};

Cochain operator+(Cochain a, const Cochain& b);
Cochain operator-(Cochain a, const Cochain& b);
Cochain operator*(double s, Cochain a);

// y += a*x
void axpy(double a, const Cochain& x, Cochain& y);

double max_abs(const Cochain& a);
double max_abs_diff(const Cochain& a, const Cochain& b);

// Vertex-collocated representation: one value per (direction set, vertex).
// Layout: values[(set * nverts + vertex) * dim + comp].
struct VertexField {
  GroupKind kind = GroupKind::U1;
  int degree = 0;
  int nsets = 0;
  std::size_t nverts = 0;
  int dim = 1;
  std::vector<double> values;

  double& at(int set, std::size_t v, int comp) {
    return values[(static_cast<std::size_t>(set) * nverts + v) * dim + comp];
  }
  double at(int set, std::size_t v, int comp) const {
    return values[(static_cast<std::size_t>(set) * nverts + v) * dim + comp];
  }
};

// Coboundary, one factor 1/h, exact d(d(.)) = 0. Degree 3 input is invalid.
Cochain d(const Cochain& omega);

// Orthogonal projector onto the boundary-condition subspace: DirichletTan0
// zeroes cells carrying a tangential boundary component, NeumannNorm0 zeroes
// normal ones, None is the identity. Idempotent by construction.
Cochain project_bc(const Cochain& omega, BcKind bc);

// Exact matrix adjoint of (d o project_bc) with respect to inner_product:
// codiff(., DirichletTan0) is the maximal codifferential (adjoint of the
// minimal derivative), codiff(., None) the minimal one (adjoint of the
// maximal derivative). Degree 0 input is invalid.
Cochain codiff(const Cochain& omega, BcKind bc_of_adjoint_domain);

// L2 pairing with uniform cell weight h^3 at every degree.
double inner_product(const Cochain& a, const Cochain& b);
double l2_norm(const Cochain& a);

// Mean of the incident p-cells at each vertex (fewer at the boundary);
// exact on constants, second-order accurate on smooth samples.
VertexField collocate(const Cochain& omega);

enum class Lp : std::uint8_t { p2, p3, p4, p6, inf };

// Vertex-collocated fiber-norm Lp mean with weight h^3 per vertex; Lp::inf is
// the max fiber norm.
double lp_norm(const Cochain& omega, Lp p);

// Graded bracket-wedge via collocation: collocate both arguments, combine the
// pointwise bracket over disjoint direction-set splits with shuffle signs,
// average the corner vertices back onto (p+q)-cells. Supported degree pairs:
// (1,0), (1,1), (1,2).
Cochain wedge_bracket(const Cochain& u, const Cochain& v);

// Exact adjoint of w -> wedge_bracket(a, w) with respect to inner_product,
// for fixed degree-1 a; maps degree p in {1,2,3} to p-1.
Cochain interior_bracket(const Cochain& a, const Cochain& v);

// Componentwise covariant derivative of the collocated field: per axis a
// central difference in the interior, one-sided second-order stencil at the
// boundary, plus the bracket with the collocated a-component of A.
struct CovariantGrad {
  std::array<VertexField, 3> partial;
};

CovariantGrad covariant_grad(const Cochain& A, const Cochain& omega);

// Sum over axes and vertices of h^3 |.|^2.
double grad_l2sq(const CovariantGrad& g, const CubeMesh& mesh);

// Max fiber norm over the cells carrying a normal (resp. tangential)
// boundary component; 0.0 if no such cell exists at this degree.
double boundary_component_max(const Cochain& omega, bool normal_part);

}  // namespace ymflow
