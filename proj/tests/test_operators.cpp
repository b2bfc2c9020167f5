#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "ymflow/fields.hpp"
#include "ymflow/forms.hpp"
#include "ymflow/operators.hpp"

using namespace ymflow;

namespace {

double rel_gap(double a, double b) {
  return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1e-30});
}

}  // namespace

TEST_CASE("active cell counts match the boundary classification tables") {
  CubeMesh mesh(4, 1.0);
  CHECK(active_cells(mesh, 0, BcKind::DirichletTan0).size() == 27);
  CHECK(active_cells(mesh, 0, BcKind::NeumannNorm0).size() == 125);
  CHECK(active_cells(mesh, 1, BcKind::DirichletTan0).size() == 108);
  CHECK(active_cells(mesh, 1, BcKind::NeumannNorm0).size() == 150);
  CHECK(active_cells(mesh, 2, BcKind::DirichletTan0).size() == 144);
  CHECK(active_cells(mesh, 2, BcKind::NeumannNorm0).size() == 60);
  CHECK(active_cells(mesh, 3, BcKind::DirichletTan0).size() == 64);
  CHECK(active_cells(mesh, 3, BcKind::NeumannNorm0).size() == 8);
  CHECK(active_cells(mesh, 1, BcKind::None).size() == 300);
}

TEST_CASE("laplacians are self-adjoint and negative semidefinite") {
  CubeMesh mesh(4, 1.0);
  for (LaplacianKind lk : {LaplacianKind::DirichletRelative, LaplacianKind::NeumannAbsolute})
    for (int p = 0; p <= 2; ++p) {
      const LinearOperator op = laplacian(mesh, GroupKind::SU2, lk, p);
      for (int t = 0; t < 5; ++t) {
        const Cochain x = project_bc(white_noise(mesh, GroupKind::SU2, p, 700 + t, 1.0),
                                     domain_bc(lk));
        const Cochain y = project_bc(white_noise(mesh, GroupKind::SU2, p, 800 + t, 1.0),
                                     domain_bc(lk));
        const double xy = inner_product(op.apply(x), y);
        const double yx = inner_product(x, op.apply(y));
        CHECK(rel_gap(xy, yx) <= 1e-12);
        CHECK(inner_product(x, op.apply(x)) <= 1e-12 * inner_product(x, x));
      }
    }
}

TEST_CASE("neumann laplacian annihilates constants at degree zero") {
  CubeMesh mesh(4, 1.0);
  const LinearOperator op = laplacian(mesh, GroupKind::U1, LaplacianKind::NeumannAbsolute, 0);
  Cochain ones(mesh, GroupKind::U1, 0);
  for (std::size_t i = 0; i < ones.value_count(); ++i) ones.data()[i] = 1.0;
  CHECK(max_abs(op.apply(ones)) <= 1e-12);
}

TEST_CASE("dense dirichlet vertex laplacian has the product sine spectrum") {
  CubeMesh mesh(6, 1.0);
  const LinearOperator op = laplacian(mesh, GroupKind::U1, LaplacianKind::DirichletRelative, 0);
  const auto act = active_cells(mesh, 0, BcKind::DirichletTan0);
  CHECK(act.size() == 125);
  const Eigen::MatrixXd M = assemble_dense(mesh, GroupKind::U1, 0, act,
                                           [&](const Cochain& x) { return op.apply(x); });
  CHECK((M - M.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  const double h = mesh.h();
  const double pi = 3.14159265358979323846;
  // 3D eigenvalues are sums of 1D second-difference modes (4/h^2) sin^2(k pi h / 2)
  const double ground = -12.0 / (h * h) * std::pow(std::sin(pi * h / 2.0), 2);
  CHECK(std::fabs(es.eigenvalues().maxCoeff() - ground) <= 1e-8);
  const double top1d = -4.0 / (h * h) * std::pow(std::sin(5.0 * pi * h / 2.0), 2);
  CHECK(std::fabs(es.eigenvalues().minCoeff() - 3.0 * top1d) <= 1e-8);
}

TEST_CASE("quadratic form and h1 norm agree with the operator pairing") {
  CubeMesh mesh(4, 1.0);
  for (LaplacianKind lk : {LaplacianKind::DirichletRelative, LaplacianKind::NeumannAbsolute}) {
    const LinearOperator op = laplacian(mesh, GroupKind::SU2, lk, 1);
    const Cochain w = project_bc(white_noise(mesh, GroupKind::SU2, 1, 900, 1.0), domain_bc(lk));
    const double q = quadratic_form(op, w);
    const double pairing = inner_product(w, w - op.apply(w));
    CHECK(rel_gap(q, pairing) <= 1e-12);
    CHECK(h1_norm(op, w) == doctest::Approx(std::sqrt(q)).epsilon(1e-13));
    CHECK(q >= inner_product(w, w) * (1.0 - 1e-12));  // the |omega|^2 term alone
  }
}

TEST_CASE("active vector conversions invert each other on the subspace") {
  CubeMesh mesh(4, 1.0);
  const auto act = active_cells(mesh, 1, BcKind::DirichletTan0);
  const Cochain x = project_bc(white_noise(mesh, GroupKind::SU2, 1, 77, 1.0),
                               BcKind::DirichletTan0);
  const Eigen::VectorXd v = to_active_vector(x, act);
  CHECK(v.size() == static_cast<Eigen::Index>(act.size() * 3));
  CHECK(max_abs_diff(from_active_vector(mesh, GroupKind::SU2, 1, act, v), x) == 0.0);
}

TEST_CASE("dense propagator is the identity at t = 0 and a semigroup in t") {
  CubeMesh mesh(4, 1.0);
  const LinearOperator op = laplacian(mesh, GroupKind::U1, LaplacianKind::DirichletRelative, 1);
  const Cochain x = project_bc(white_noise(mesh, GroupKind::U1, 1, 55, 1.0),
                               BcKind::DirichletTan0);
  const DenseOperator p0 = dense_propagator(op, 0.0);
  CHECK(max_abs_diff(p0.apply(x), x) <= 1e-13);
  const DenseOperator pa = dense_propagator(op, 0.003);
  const DenseOperator pb = dense_propagator(op, 0.007);
  const DenseOperator pab = dense_propagator(op, 0.010);
  CHECK(max_abs_diff(pa.apply(pb.apply(x)), pab.apply(x)) <= 1e-10);
}

TEST_CASE("dense assembly and propagator enforce their size gates") {
  CubeMesh m8(8, 1.0);
  const auto act8 = active_cells(m8, 1, BcKind::DirichletTan0);
  CHECK_THROWS_AS(assemble_dense(m8, GroupKind::SU2, 1, act8,
                                 [](const Cochain& x) { return x; }),
                  SizeLimitExceeded);
  CubeMesh m10(10, 1.0);
  const LinearOperator op10 =
      laplacian(m10, GroupKind::U1, LaplacianKind::DirichletRelative, 0);
  CHECK_THROWS_AS(dense_propagator(op10, 0.01), SizeLimitExceeded);
}

TEST_CASE("dense assembly reproduces the operator column by column") {
  CubeMesh mesh(3, 1.0);
  const LinearOperator op = laplacian(mesh, GroupKind::U1, LaplacianKind::NeumannAbsolute, 1);
  const auto act = active_cells(mesh, 1, BcKind::NeumannNorm0);
  const Eigen::MatrixXd M = assemble_dense(mesh, GroupKind::U1, 1, act,
                                           [&](const Cochain& x) { return op.apply(x); });
  const Cochain x = project_bc(white_noise(mesh, GroupKind::U1, 1, 66, 1.0),
                               BcKind::NeumannNorm0);
  const Eigen::VectorXd dense_image = M * to_active_vector(x, act);
  const Eigen::VectorXd direct_image = to_active_vector(op.apply(x), act);
  CHECK((dense_image - direct_image).cwiseAbs().maxCoeff() <= 1e-11);
}
