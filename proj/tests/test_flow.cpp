#include <doctest.h>

#include <cmath>

#include "ymflow/diagnostics.hpp"
#include "ymflow/fields.hpp"
#include "ymflow/flow.hpp"
#include "ymflow/forms.hpp"
#include "ymflow/operators.hpp"

using namespace ymflow;

namespace {

FlowConfig base_config(GroupKind g, int n, FlowBc bc) {
  FlowConfig cfg;
  cfg.group = g;
  cfg.n = n;
  cfg.bc = bc;
  cfg.theta = 1.0 / 6.0;
  cfg.T = 0.02;
  cfg.record_stride = 1;
  return cfg;
}

BcKind flow_projector(FlowBc bc) {
  return bc == FlowBc::Dirichlet ? BcKind::DirichletTan0 : BcKind::NeumannNorm0;
}

}  // namespace

TEST_CASE("config validation enforces the parabolic stability bound") {
  FlowConfig cfg = base_config(GroupKind::SU2, 8, FlowBc::Dirichlet);
  CHECK(cfg.effective_dt() == doctest::Approx(cfg.h() * cfg.h() / 6.0).epsilon(1e-15));
  CHECK_FALSE(cfg.validate());  // 1/6 sits exactly at the warning level
  cfg.theta = 0.3;
  CHECK(cfg.validate());  // above the warning level, below the hard bound
  cfg.theta = 0.4;
  CHECK_THROWS_AS(cfg.validate(), InvalidParameter);
  cfg.theta = 1.0 / 6.0;
  cfg.n = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidParameter);
  cfg.n = 8;
  cfg.T = -1.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidParameter);
}

TEST_CASE("flow right-hand sides reject fields off the constraint subspace") {
  CubeMesh mesh(4, 1.0);
  const Cochain raw = white_noise(mesh, GroupKind::SU2, 1, 5, 0.5);
  CHECK_THROWS_AS(ym_rhs(raw, FlowBc::Dirichlet), DomainViolation);
  CHECK_THROWS_AS(parabolic_rhs(raw, FlowBc::Neumann), DomainViolation);
  CHECK_NOTHROW(ym_rhs(project_bc(raw, BcKind::DirichletTan0), FlowBc::Dirichlet));
  CHECK_NOTHROW(ym_rhs(raw, FlowBc::Marini));
}

TEST_CASE("abelian parabolic right-hand side is exactly the hodge laplacian") {
  CubeMesh mesh(6, 1.0);
  const Cochain C = random_smooth(mesh, GroupKind::U1, 1, BcKind::DirichletTan0, 3, 0.8, 2);
  const LinearOperator lap =
      laplacian(mesh, GroupKind::U1, LaplacianKind::DirichletRelative, 1);
  const Cochain r = parabolic_rhs(C, FlowBc::Dirichlet);
  CHECK(l2_norm(r - lap.apply(C)) <= 1e-12 * l2_norm(r));
}

TEST_CASE("euler and rk4 steps match the dense linear stage polynomials") {
  CubeMesh mesh(4, 1.0);
  const BcKind bk = BcKind::DirichletTan0;
  const Cochain y = random_smooth(mesh, GroupKind::U1, 1, bk, 9, 0.8, 2);
  const auto act = active_cells(mesh, 1, bk);
  const auto rhs = [&](const Cochain& x) { return ym_rhs(x, FlowBc::Dirichlet); };
  const Eigen::MatrixXd G = assemble_dense(mesh, GroupKind::U1, 1, act, rhs);
  const Eigen::VectorXd y0 = to_active_vector(y, act);
  const double dt = 1e-3;

  const Cochain e1 = step(y, rhs, Scheme::Euler, dt, bk);
  const Eigen::VectorXd e1d = y0 + dt * (G * y0);
  CHECK(max_abs_diff(e1, from_active_vector(mesh, GroupKind::U1, 1, act, e1d)) <= 1e-13);

  const Cochain r1 = step(y, rhs, Scheme::RK4, dt, bk);
  Eigen::VectorXd acc = y0, term = y0;
  for (int k = 1; k <= 4; ++k) {
    term = dt / k * (G * term);
    acc += term;
  }
  CHECK(max_abs_diff(r1, from_active_vector(mesh, GroupKind::U1, 1, act, acc)) <= 1e-12);
}

TEST_CASE("rk4 error against the dense propagator scales as dt^4") {
  CubeMesh mesh(6, 1.0);
  const BcKind bk = BcKind::DirichletTan0;
  const Cochain A0 = random_smooth(mesh, GroupKind::U1, 1, bk, 5, 0.7, 2);
  const auto act = active_cells(mesh, 1, bk);
  const auto rhs = [&](const Cochain& x) { return ym_rhs(x, FlowBc::Dirichlet); };
  const double T = 0.01;
  const DenseOperator prop = dense_propagator(mesh, GroupKind::U1, 1, act, rhs, T);
  const Cochain exact = prop.apply(A0);
  double errs[2];
  for (int lev = 0; lev < 2; ++lev) {
    const int nsteps = 8 << lev;
    const double dt = T / nsteps;
    Cochain y = A0;
    for (int k = 0; k < nsteps; ++k) y = step(y, rhs, Scheme::RK4, dt, bk);
    errs[lev] = max_abs_diff(y, exact);
  }
  CHECK(errs[0] / errs[1] >= 8.0);
  CHECK(errs[0] / errs[1] <= 32.0);
}

TEST_CASE("integrate records on the stride grid and always lands on T") {
  CubeMesh mesh(6, 1.0);
  FlowConfig cfg = base_config(GroupKind::SU2, 6, FlowBc::Dirichlet);
  cfg.dt = 1e-3;
  cfg.T = 10e-3;
  cfg.record_stride = 2;
  cfg.store = StoreFields::B;
  const Cochain A0 = random_smooth(mesh, GroupKind::SU2, 1, BcKind::DirichletTan0, 7, 0.5, 2);
  const Trajectory traj = integrate(mesh, cfg, A0);
  REQUIRE(traj.records.size() == 6);
  for (std::size_t k = 0; k < 6; ++k)
    CHECK(traj.records[k].t == doctest::Approx(2e-3 * k).epsilon(1e-12));
  CHECK(traj.B_fields.size() == traj.records.size());
  REQUIRE(traj.final_A.has_value());
  CHECK_FALSE(traj.blew_up);
  CHECK(traj.initial_B_l2() == doctest::Approx(l2_norm(curvature(A0))).epsilon(1e-13));
  // stored curvature matches the records it is aligned with
  for (std::size_t k = 0; k < 6; ++k)
    CHECK(l2_norm(traj.B_fields[k]) == doctest::Approx(traj.records[k].B_l2).epsilon(1e-12));
}

TEST_CASE("record fields carry the weighted norms and the time weight") {
  CubeMesh mesh(5, 1.0);
  const Cochain A = random_smooth(mesh, GroupKind::SU2, 1, BcKind::DirichletTan0, 11, 0.6, 2);
  const Cochain Ap = ym_rhs(A, FlowBc::Dirichlet);
  const FlowRecord r = make_record(0.16, A, Ap, FlowBc::Dirichlet);
  const Cochain B = curvature(A);
  CHECK(r.B_l2 == doctest::Approx(l2_norm(B)).epsilon(1e-14));
  CHECK(r.B_l3 == doctest::Approx(lp_norm(B, Lp::p3)).epsilon(1e-14));
  CHECK(r.B_linf == doctest::Approx(lp_norm(B, Lp::inf)).epsilon(1e-14));
  CHECK(r.Aprime_l2 == doctest::Approx(l2_norm(Ap)).epsilon(1e-14));
  CHECK(r.A_l2 == doctest::Approx(l2_norm(A)).epsilon(1e-14));
  CHECK(r.dstarA_l2 == doctest::Approx(l2_norm(codiff(A, BcKind::DirichletTan0))).epsilon(1e-12));
  CHECK(r.t34_B_linf == doctest::Approx(std::pow(0.16, 0.75) * r.B_linf).epsilon(1e-14));
}

TEST_CASE("curvature norm decreases along every flow and bc combination") {
  for (GroupKind g : {GroupKind::U1, GroupKind::SU2})
    for (FlowBc bc : {FlowBc::Dirichlet, FlowBc::Neumann})
      for (FlowKind fk : {FlowKind::Direct, FlowKind::Parabolic}) {
        CubeMesh mesh(6, 1.0);
        FlowConfig cfg = base_config(g, 6, bc);
        cfg.flow = fk;
        const Cochain A0 = random_smooth(mesh, g, 1, flow_projector(bc), 3, 0.5, 2);
        const Trajectory traj = integrate(mesh, cfg, A0);
        const double slack = 1e-10 * traj.initial_B_l2();
        for (std::size_t k = 1; k < traj.records.size(); ++k)
          CHECK(traj.records[k].B_l2 <= traj.records[k - 1].B_l2 + slack);
      }
}

TEST_CASE("dirichlet evolution preserves the tangential-zero residual") {
  CubeMesh mesh(6, 1.0);
  FlowConfig cfg = base_config(GroupKind::SU2, 6, FlowBc::Dirichlet);
  const Cochain A0 = random_smooth(mesh, GroupKind::SU2, 1, BcKind::DirichletTan0, 13, 0.6, 2);
  const Trajectory traj = integrate(mesh, cfg, A0);
  for (const FlowRecord& r : traj.records) CHECK(r.bc_residual_linf <= 1e-12);
}

TEST_CASE("unstable euler run trips the blow-up guard instead of overflowing") {
  CubeMesh mesh(8, 1.0);
  FlowConfig cfg = base_config(GroupKind::U1, 8, FlowBc::Dirichlet);
  cfg.scheme = Scheme::Euler;
  cfg.theta = 1.0 / 3.0;  // right at the hard bound: top modes are not damped
  cfg.T = 0.3;
  const Cochain A0 = project_bc(white_noise(mesh, GroupKind::U1, 1, 17, 1.0),
                                BcKind::DirichletTan0);
  const Trajectory traj = integrate(mesh, cfg, A0);
  CHECK(traj.cfl_warning);
  CHECK(traj.blew_up);
  CHECK(traj.records.back().t < cfg.T);  // stopped early
  CHECK(std::isfinite(traj.records.back().B_l2));
}

TEST_CASE("gauge ode steps compose exactly for frozen coefficients") {
  CubeMesh mesh(4, 1.0);
  const Cochain V = white_noise(mesh, GroupKind::SU2, 0, 19, 0.8);
  GaugeField g = identity_gauge(mesh, GroupKind::SU2);
  gauge_ode_step(g, V, 0.01);
  gauge_ode_step(g, V, 0.01);
  GaugeField g2 = identity_gauge(mesh, GroupKind::SU2);
  gauge_ode_step(g2, V, 0.02);
  for (std::size_t v = 0; v < g.g.size(); ++v)
    for (int c = 0; c < 4; ++c) CHECK(g.g[v].q[c] == doctest::Approx(g2.g[v].q[c]).epsilon(1e-14));
  // one step from the identity is the plain exponential
  GaugeField g3 = identity_gauge(mesh, GroupKind::SU2);
  gauge_ode_step(g3, V, 0.5);
  for (std::size_t v = 0; v < g3.g.size(); ++v) {
    AlgElem x = V.get(v);
    for (int c = 0; c < 3; ++c) x.c[c] *= 0.5;
    const GroupElem want = exp_alg(x);
    for (int c = 0; c < 4; ++c) CHECK(g3.g[v].q[c] == doctest::Approx(want.q[c]).epsilon(1e-14));
  }
}

TEST_CASE("gauge reconstruction tracks the direct abelian flow") {
  CubeMesh mesh(6, 1.0);
  FlowConfig cfg = base_config(GroupKind::U1, 6, FlowBc::Dirichlet);
  cfg.flow = FlowKind::Parabolic;
  cfg.theta = 1.0 / 24.0;  // many steps past epsilon so the gauge is active
  cfg.T = 0.05;
  cfg.epsilon = 4.0 * cfg.effective_dt();
  const Cochain A0 = random_smooth(mesh, GroupKind::U1, 1, BcKind::DirichletTan0, 23, 0.6, 2);
  const DsResult ds = donaldson_sadun(mesh, cfg, A0);
  REQUIRE_FALSE(ds.traj_Ae.records.empty());
  CHECK(ds.traj_Ae.records.front().t >= cfg.epsilon - 1e-12);

  FlowConfig dir = cfg;
  dir.flow = FlowKind::Direct;
  const Trajectory direct = integrate(mesh, dir, A0);
  REQUIRE(ds.traj_Ae.final_A.has_value());
  REQUIRE(direct.final_A.has_value());
  const double gap =
      l2_norm(*ds.traj_Ae.final_A - *direct.final_A) / l2_norm(*direct.final_A);
  CHECK(gap <= 0.3);  // smoke-level gate at this coarse resolution
}

TEST_CASE("marini pipeline runs the collar gauge and hands back the original frame") {
  CubeMesh mesh(6, 1.0);
  FlowConfig cfg = base_config(GroupKind::SU2, 6, FlowBc::Marini);
  cfg.T = 0.01;
  const Cochain A0 = random_smooth(mesh, GroupKind::SU2, 1, BcKind::None, 29, 0.6, 2);
  const Trajectory traj = integrate(mesh, cfg, A0);
  CHECK_FALSE(traj.blew_up);
  REQUIRE(traj.final_A.has_value());
  // evolution happened: the returned field differs from the input but keeps
  // its scale
  const double moved = l2_norm(*traj.final_A - A0);
  CHECK(moved > 1e-6);
  CHECK(moved < l2_norm(A0));
}
