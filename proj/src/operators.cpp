#include "ymflow/operators.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <string>

namespace ymflow {

LinearOperator laplacian(const CubeMesh& mesh, GroupKind group, LaplacianKind kind,
                         int degree) {
  if (degree < 0 || degree > 3) throw InvalidDegree("laplacian degree must be in [0,3]");
  LinearOperator op;
  op.mesh = &mesh;
  op.kind = group;
  op.degree = degree;
  op.lap_kind = kind;
  const BcKind bc = domain_bc(kind);
  op.active = active_cells(mesh, degree, bc);
  op.apply_fn = [&mesh, group, degree, kind, bc](const Cochain& x) {
    if (x.degree() != degree || &x.mesh() != &mesh || x.kind() != group)
      throw InvalidOperands("laplacian operand mismatch");
    const Cochain u = project_bc(x, bc);
    Cochain acc(mesh, group, degree);
    if (degree < 3) {
      // down-composition d* d with the kind's adjoint pairing
      if (kind == LaplacianKind::DirichletRelative)
        acc += codiff(d(u), BcKind::DirichletTan0);
      else
        acc += project_bc(codiff(d(u), BcKind::None), BcKind::NeumannNorm0);
    }
    if (degree > 0) {
      if (kind == LaplacianKind::DirichletRelative)
        acc += project_bc(d(codiff(u, BcKind::DirichletTan0)), BcKind::DirichletTan0);
      else
        acc += project_bc(d(codiff(u, BcKind::None)), BcKind::NeumannNorm0);
    }
    acc *= -1.0;
    return acc;
  };
  return op;
}

double quadratic_form(const LinearOperator& op, const Cochain& omega) {
  const BcKind bc = domain_bc(op.lap_kind);
  const Cochain u = project_bc(omega, bc);
  if (max_abs_diff(u, omega) != 0.0)
    throw DomainViolation("quadratic form requires omega in the domain subspace");
  double q = inner_product(omega, omega);
  if (op.degree < 3) {
    const Cochain du = d(u);
    q += inner_product(du, du);
  }
  if (op.degree > 0) {
    const Cochain cu = op.lap_kind == LaplacianKind::DirichletRelative
                           ? codiff(u, BcKind::DirichletTan0)
                           : codiff(u, BcKind::None);
    q += inner_product(cu, cu);
  }
  return q;
}

double h1_norm(const LinearOperator& op, const Cochain& omega) {
  return std::sqrt(quadratic_form(op, omega));
}

std::vector<std::size_t> active_cells(const CubeMesh& mesh, int degree, BcKind bc) {
  std::vector<std::size_t> act;
  act.reserve(mesh.cell_count(degree));
  for (std::size_t cell = 0; cell < mesh.cell_count(degree); ++cell) {
    bool keep = true;
    if (bc == BcKind::DirichletTan0) keep = !mesh.tangential_at_boundary(degree, cell);
    if (bc == BcKind::NeumannNorm0) keep = !mesh.normal_at_boundary(degree, cell);
    if (keep) act.push_back(cell);
  }
  return act;
}

Eigen::MatrixXd assemble_dense(const CubeMesh& mesh, GroupKind group, int degree,
                               const std::vector<std::size_t>& active,
                               const std::function<Cochain(const Cochain&)>& fn) {
  const int dim = algebra_dim(group);
  const std::size_t m = active.size() * dim;
  if (m * m > 4'000'000)
    throw SizeLimitExceeded("dense assembly would need " + std::to_string(m * m) +
                            " entries (limit 4e6)");
  Eigen::MatrixXd M(m, m);
  Cochain basis(mesh, group, degree);
  for (std::size_t col = 0; col < m; ++col) {
    basis.set_zero();
    basis.at(active[col / dim], static_cast<int>(col % dim)) = 1.0;
    const Cochain img = fn(basis);
    for (std::size_t row = 0; row < m; ++row)
      M(row, col) = img.at(active[row / dim], static_cast<int>(row % dim));
  }
  return M;
}

Eigen::VectorXd to_active_vector(const Cochain& x, const std::vector<std::size_t>& active) {
  const int dim = x.dim();
  Eigen::VectorXd v(active.size() * dim);
  for (std::size_t i = 0; i < active.size(); ++i)
    for (int c = 0; c < dim; ++c) v(i * dim + c) = x.at(active[i], c);
  return v;
}

Cochain from_active_vector(const CubeMesh& mesh, GroupKind group, int degree,
                           const std::vector<std::size_t>& active,
                           const Eigen::VectorXd& v) {
  Cochain x(mesh, group, degree);
  const int dim = x.dim();
  for (std::size_t i = 0; i < active.size(); ++i)
    for (int c = 0; c < dim; ++c) x.at(active[i], c) = v(i * dim + c);
  return x;
}

Cochain DenseOperator::apply(const Cochain& x) const {
  return from_active_vector(*mesh, kind, degree, active, mat * to_active_vector(x, active));
}

DenseOperator dense_propagator(const CubeMesh& mesh, GroupKind group, int degree,
                               const std::vector<std::size_t>& active,
                               const std::function<Cochain(const Cochain&)>& generator,
                               double t) {
  if (mesh.n() > 8)
    throw SizeLimitExceeded("dense propagator gated to n <= 8, got n = " +
                            std::to_string(mesh.n()));
  DenseOperator dop;
  dop.mesh = &mesh;
  dop.kind = group;
  dop.degree = degree;
  dop.active = active;
  const Eigen::MatrixXd G = assemble_dense(mesh, group, degree, active, generator);
  dop.mat = (t * G).exp();
  return dop;
}

DenseOperator dense_propagator(const LinearOperator& op, double t) {
  return dense_propagator(*op.mesh, op.kind, op.degree, op.active, op.apply_fn, t);
}

}  // namespace ymflow
