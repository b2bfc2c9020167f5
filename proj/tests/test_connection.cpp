#include <doctest.h>

#include <cmath>

#include "ymflow/connection.hpp"
#include "ymflow/fields.hpp"
#include "ymflow/forms.hpp"

using namespace ymflow;

namespace {

double rel_gap(double a, double b) {
  return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1e-30});
}

// depth of a vertex from the nearest wall in layers
int vertex_depth(const CubeMesh& mesh, int i, int j, int k) {
  const int n = mesh.n();
  int d = n;
  for (int v : {i, j, k}) d = std::min({d, v, n - v});
  return d;
}

}  // namespace

TEST_CASE("curvature assembles the quadratic field strength") {
  CubeMesh mesh(6, 1.0);
  const Cochain A = random_smooth(mesh, GroupKind::SU2, 1, BcKind::None, 2, 0.8, 2);
  const Cochain B = curvature(A);
  CHECK(B.degree() == 2);
  CHECK(max_abs(B - d(A) - 0.5 * wedge_bracket(A, A)) <= 1e-15);
  // abelian curvature is plain dA
  const Cochain Au = random_smooth(mesh, GroupKind::U1, 1, BcKind::None, 2, 0.8, 2);
  CHECK(max_abs(curvature(Au) - d(Au)) == 0.0);
}

TEST_CASE("gauge action on one edge matches the hand-computed formula") {
  CubeMesh mesh(2, 1.0);
  const double h = mesh.h();
  GaugeField g = identity_gauge(mesh, GroupKind::SU2);
  AlgElem vx = alg_zero(GroupKind::SU2), vy = alg_zero(GroupKind::SU2);
  vx.c = {0.3, -0.2, 0.5};
  vy.c = {-0.1, 0.4, 0.2};
  const std::size_t tail = mesh.vertex_index(0, 1, 1), head = mesh.vertex_index(1, 1, 1);
  g.g[tail] = exp_alg(vx);
  g.g[head] = exp_alg(vy);

  Cochain A(mesh, GroupKind::SU2, 1);
  CellId e;
  e.degree = 1;
  e.dirs = 1;
  e.i = 0, e.j = 1, e.k = 1;
  AlgElem u = alg_zero(GroupKind::SU2);
  u.c = {0.7, 0.1, -0.4};
  A.set(mesh.cell_index(e), u);

  const Cochain Ag = gauge_transform(A, g);
  const AlgElem adx = ad_action(inverse(g.g[tail]), u);
  const AlgElem ady = ad_action(inverse(g.g[head]), u);
  const AlgElem lg = log_group(mul(inverse(g.g[tail]), g.g[head]));
  const AlgElem got = Ag.get(mesh.cell_index(e));
  for (int c = 0; c < 3; ++c) {
    const double want = 0.5 * (adx.c[c] + ady.c[c]) + lg.c[c] / h;
    CHECK(got.c[c] == doctest::Approx(want).epsilon(1e-13));
  }
}

TEST_CASE("constant gauge transforms exactly: roundtrip, composition, conjugated curvature") {
  CubeMesh mesh(6, 1.0);
  const Cochain A = random_smooth(mesh, GroupKind::SU2, 1, BcKind::None, 9, 0.8, 2);
  const GaugeField g = constant_gauge(mesh, GroupKind::SU2, 21);
  const GaugeField k = constant_gauge(mesh, GroupKind::SU2, 22);

  const Cochain Ag = gauge_transform(A, g);
  CHECK(max_abs_diff(gauge_transform(Ag, inverse(g)), A) <= 1e-13);
  CHECK(rel_gap(l2_norm(Ag), l2_norm(A)) <= 1e-14);

  // (A^g)^k = A^{gk}
  GaugeField gk(mesh, GroupKind::SU2);
  for (std::size_t v = 0; v < gk.g.size(); ++v) gk.g[v] = mul(g.g[v], k.g[v]);
  CHECK(max_abs_diff(gauge_transform(Ag, k), gauge_transform(A, gk)) <= 1e-13);

  // curvature conjugates pointwise
  const Cochain B = curvature(A);
  Cochain Bconj(mesh, GroupKind::SU2, 2);
  for (std::size_t c = 0; c < B.cells(); ++c)
    Bconj.set(c, ad_action(inverse(g.g[0]), B.get(c)));
  CHECK(max_abs_diff(curvature(Ag), Bconj) <= 1e-13);
}

TEST_CASE("varying gauge roundtrip error is first order in h") {
  double prev = 0.0;
  for (int n : {8, 16}) {
    CubeMesh mesh(n, 1.0);
    const Cochain A = random_smooth(mesh, GroupKind::SU2, 1, BcKind::None, 9, 0.8, 2);
    const GaugeField g = smooth_gauge(mesh, GroupKind::SU2, 4, 0.8, false);
    const double diff = l2_norm(gauge_transform(gauge_transform(A, g), inverse(g)) - A);
    if (n == 8) {
      prev = diff;
      CHECK(diff > 1e-6);  // genuinely varying
    } else {
      CHECK(prev / diff >= 2.0);
    }
  }
}

TEST_CASE("pure gauge of constant and identity gauges vanishes") {
  CubeMesh mesh(4, 1.0);
  CHECK(max_abs(pure_gauge(identity_gauge(mesh, GroupKind::SU2))) == 0.0);
  // constant gauge leaves only the rounding of g^-1 g to cancel, amplified
  // by the 1/h in the log term
  CHECK(max_abs(pure_gauge(constant_gauge(mesh, GroupKind::SU2, 5))) <= 1e-13);
}

TEST_CASE("pure gauge connections are flat to first order under refinement") {
  double prev = 0.0;
  for (int n : {8, 16}) {
    CubeMesh mesh(n, 1.0);
    const GaugeField g = smooth_gauge(mesh, GroupKind::SU2, 15, 0.6, true);
    const Cochain A = pure_gauge(g);
    const double b = l2_norm(curvature(A));
    CHECK(l2_norm(A) > 0.01);  // not the trivial gauge
    if (n == 8) prev = b;
    else CHECK(prev / b >= 2.0);
  }
}

TEST_CASE("gauge_transform and pure_gauge compose: zero transforms to the pure gauge") {
  CubeMesh mesh(6, 1.0);
  const GaugeField g = smooth_gauge(mesh, GroupKind::SU2, 7, 0.5, false);
  const Cochain zero = zero_field(mesh, GroupKind::SU2, 1);
  CHECK(max_abs_diff(gauge_transform(zero, g), pure_gauge(g)) <= 1e-14);
}

TEST_CASE("gauge_rotate preserves norms for constant gauges and never expands") {
  CubeMesh mesh(6, 1.0);
  const Cochain w = random_smooth(mesh, GroupKind::SU2, 1, BcKind::None, 8, 1.0, 2);
  const GaugeField gc = constant_gauge(mesh, GroupKind::SU2, 10);
  CHECK(rel_gap(l2_norm(gauge_rotate(w, gc)), l2_norm(w)) <= 1e-14);
  // averaging two rotations is a pointwise contraction
  const GaugeField gv = smooth_gauge(mesh, GroupKind::SU2, 11, 1.0, false);
  CHECK(l2_norm(gauge_rotate(w, gv)) <= l2_norm(w) * (1.0 + 1e-13));
}

TEST_CASE("covariant operators at zero connection reduce to the plain pair") {
  CubeMesh mesh(4, 1.0);
  const Cochain A0 = zero_field(mesh, GroupKind::SU2, 1);
  const Cochain w = white_noise(mesh, GroupKind::SU2, 1, 61, 1.0);
  const Cochain v = white_noise(mesh, GroupKind::SU2, 2, 62, 1.0);
  const Cochain pw = project_bc(w, BcKind::DirichletTan0);
  CHECK(max_abs_diff(cov_d(A0, pw, CovVariant::minimal), d(pw)) == 0.0);
  CHECK(max_abs_diff(cov_d(A0, w, CovVariant::maximal), d(w)) == 0.0);
  CHECK(max_abs_diff(cov_codiff(A0, v, CovCodiffVariant::maximal_adjoint_of_minimal),
                     codiff(v, BcKind::DirichletTan0)) == 0.0);
  CHECK(max_abs_diff(cov_codiff(A0, v, CovCodiffVariant::minimal_adjoint_of_maximal),
                     codiff(v, BcKind::None)) == 0.0);
}

TEST_CASE("covariant codifferentials are exact adjoints of their derivative variant") {
  CubeMesh mesh(4, 1.0);
  const Cochain A = random_smooth(mesh, GroupKind::SU2, 1, BcKind::None, 71, 0.8, 2);
  for (int p = 0; p <= 2; ++p)
    for (int t = 0; t < 8; ++t) {
      const Cochain u = white_noise(mesh, GroupKind::SU2, p, 500 + t, 1.0);
      const Cochain v = white_noise(mesh, GroupKind::SU2, p + 1, 600 + t, 1.0);
      const Cochain pu = project_bc(u, BcKind::DirichletTan0);
      const double lhs_min = inner_product(cov_d(A, pu, CovVariant::minimal), v);
      const double rhs_min =
          inner_product(pu, cov_codiff(A, v, CovCodiffVariant::maximal_adjoint_of_minimal));
      CHECK(rel_gap(lhs_min, rhs_min) <= 1e-12);
      const double lhs_max = inner_product(cov_d(A, u, CovVariant::maximal), v);
      const double rhs_max =
          inner_product(u, cov_codiff(A, v, CovCodiffVariant::minimal_adjoint_of_maximal));
      CHECK(rel_gap(lhs_max, rhs_max) <= 1e-12);
    }
}

TEST_CASE("minimal covariant derivative rejects fields off its domain") {
  CubeMesh mesh(4, 1.0);
  const Cochain A = zero_field(mesh, GroupKind::SU2, 1);
  Cochain w = white_noise(mesh, GroupKind::SU2, 1, 81, 1.0);
  CHECK_THROWS_AS(cov_d(A, w, CovVariant::minimal), DomainViolation);
}

TEST_CASE("bianchi identity holds to first order in h") {
  double prev = 0.0;
  for (int n : {8, 16}) {
    CubeMesh mesh(n, 1.0);
    const Cochain A = random_smooth(mesh, GroupKind::SU2, 1, BcKind::None, 13, 0.8, 2);
    const Cochain B = curvature(A);
    const double defect = l2_norm(cov_d(A, B, CovVariant::maximal)) / l2_norm(B);
    if (n == 8) {
      prev = defect;
      CHECK(defect <= 0.05);
    } else {
      CHECK(prev / defect >= 1.5);
    }
  }
}

TEST_CASE("normal gauge zeroes every first-layer perpendicular edge") {
  CubeMesh mesh(8, 1.0);
  const Cochain A = random_smooth(mesh, GroupKind::SU2, 1, BcKind::None, 31, 0.8, 2);
  const NormalGaugeResult res = normal_gauge(A);
  CHECK(res.conflict_residual <= 1e-12);
  CHECK(max_abs_diff(res.A, gauge_transform(A, res.g)) == 0.0);

  // gauge support: identity from the second layer inward; walls and first
  // layer carry the collar gauge (walls only at edge/corner fixup anchors)
  const int n = mesh.n();
  const GroupElem id = group_identity(GroupKind::SU2);
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i) {
        if (vertex_depth(mesh, i, j, k) < 2) continue;
        const GroupElem g = res.g.g[mesh.vertex_index(i, j, k)];
        for (int c = 0; c < 4; ++c) CHECK(g.q[c] == id.q[c]);
      }

  // every edge from a wall vertex into the first layer is zero after the
  // transform, including along the edge and corner collars
  double worst = 0.0;
  for (std::size_t e = 0; e < res.A.cells(); ++e) {
    const CellId id1 = mesh.cell_id(1, e);
    const int axis = id1.dirs == 1 ? 0 : id1.dirs == 2 ? 1 : 2;
    const int a = axis == 0 ? id1.i : axis == 1 ? id1.j : id1.k;
    if (a == 0 || a == n - 1) {
      // skip edges lying inside a wall (those are tangential, not claimed)
      const int t1 = axis == 0 ? id1.j : id1.i;
      const int t2 = axis == 2 ? id1.j : id1.k;
      if (t1 == 0 || t1 == n || t2 == 0 || t2 == n) continue;
      worst = std::max(worst, alg_norm(res.A.get(e)));
    }
  }
  CHECK(worst <= 1e-12);
}
