#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "ymflow/forms.hpp"

namespace ymflow {

// Hodge Laplacians assembled from the coboundary and its projected adjoints.
// NeumannAbsolute pairs the unrestricted derivative with the minimal
// codifferential on the normal-zero subspace; DirichletRelative pairs the
// minimal derivative with the maximal codifferential on the tangential-zero
// subspace. Both are realized as the operator associated with the quadratic
// form on the subspace, i.e. sandwiched by the domain projector, so they are
// self-adjoint and negative semidefinite on the whole cochain space.
enum class LaplacianKind : std::uint8_t { NeumannAbsolute = 0, DirichletRelative = 1 };

inline BcKind domain_bc(LaplacianKind k) {
  return k == LaplacianKind::DirichletRelative ? BcKind::DirichletTan0
                                               : BcKind::NeumannNorm0;
}

struct LinearOperator {
  const CubeMesh* mesh = nullptr;
  GroupKind kind = GroupKind::U1;
  int degree = 0;
  LaplacianKind lap_kind = LaplacianKind::NeumannAbsolute;
  std::function<Cochain(const Cochain&)> apply_fn;
  std::vector<std::size_t> active;  // cells kept by the domain projector

  Cochain apply(const Cochain& x) const { return apply_fn(x); }
};

LinearOperator laplacian(const CubeMesh& mesh, GroupKind group, LaplacianKind kind,
                         int degree);

// Q(omega) = |D omega|^2 + |D* omega|^2 + |omega|^2 with the kind's operator
// pair; equals inner(omega, omega - Laplacian(omega)) on the domain subspace.
double quadratic_form(const LinearOperator& op, const Cochain& omega);
double h1_norm(const LinearOperator& op, const Cochain& omega);

// Cells of one degree kept by the domain projector of a boundary condition.
std::vector<std::size_t> active_cells(const CubeMesh& mesh, int degree, BcKind bc);

// Dense assembly of an arbitrary linear cochain endomorphism restricted to an
// active-cell subspace; columns are the images of the subspace basis vectors.
// Throws SizeLimitExceeded above 4e6 matrix entries.
Eigen::MatrixXd assemble_dense(const CubeMesh& mesh, GroupKind group, int degree,
                               const std::vector<std::size_t>& active,
                               const std::function<Cochain(const Cochain&)>& fn);

Eigen::VectorXd to_active_vector(const Cochain& x, const std::vector<std::size_t>& active);
Cochain from_active_vector(const CubeMesh& mesh, GroupKind group, int degree,
                           const std::vector<std::size_t>& active,
                           const Eigen::VectorXd& v);

// Dense matrix exponential exp(t * Laplacian) on the active subspace,
// computed by scaling-and-squaring on the dense assembly. Gated to n <= 8.
struct DenseOperator {
  const CubeMesh* mesh = nullptr;
  GroupKind kind = GroupKind::U1;
  int degree = 0;
  std::vector<std::size_t> active;
  Eigen::MatrixXd mat;

  Cochain apply(const Cochain& x) const;
};

DenseOperator dense_propagator(const LinearOperator& op, double t);

// Propagator for a caller-supplied generator (same gating); used by the
// abelian flow oracles where the right-hand side is linear.
DenseOperator dense_propagator(const CubeMesh& mesh, GroupKind group, int degree,
                               const std::vector<std::size_t>& active,
                               const std::function<Cochain(const Cochain&)>& generator,
                               double t);

}  // namespace ymflow
