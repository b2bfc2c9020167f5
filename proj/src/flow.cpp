#include "ymflow/flow.hpp"
#include <algorithm>

#include <cmath>
#include <string>

#include "ymflow/errors.hpp"

namespace ymflow {

bool FlowConfig::validate() const {
  if (n < 2) throw InvalidParameter("n must be at least 2");
  if (!(L > 0.0) || !std::isfinite(L)) throw InvalidParameter("L must be positive");
  if (!(T > 0.0) || !std::isfinite(T)) throw InvalidParameter("T must be positive");
  if (record_stride < 1) throw InvalidParameter("record_stride must be at least 1");
  const double step = effective_dt();
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidParameter("dt must be positive");
  if (epsilon < 0.0 || epsilon >= T) throw InvalidParameter("epsilon must lie in [0, T)");
  const double factor = step / (h() * h());
  if (factor > 1.0 / 3.0 + 1e-12)
    throw InvalidParameter("time step violates the stability bound dt <= h^2/3");
  return factor > 1.0 / 6.0 + 1e-12;
}

namespace {

BcKind constraint_of(FlowBc bc) {
  switch (bc) {
    case FlowBc::Dirichlet: return BcKind::DirichletTan0;
    case FlowBc::Neumann: return BcKind::NeumannNorm0;
    default: return BcKind::None;
  }
}

void require_in_domain(const Cochain& A, FlowBc bc, const char* who) {
  if (bc == FlowBc::Marini) return;
  const Cochain p = project_bc(A, constraint_of(bc));
  if (max_abs_diff(p, A) != 0.0)
    throw DomainViolation(std::string(who) + ": input violates the boundary constraint");
}

// Copies each boundary-vertex value from its clamped interior neighbor. The
// result has exactly zero difference across every first-layer normal edge,
// so a gauge generated from it transports a normal-zero field inside the
// normal-zero subspace; the raw codifferential has O(1) normal differences
// there, and using it would feed the reconstruction components the direct
// flow never damps.
Cochain neumann_extend(const Cochain& V) {
  const CubeMesh& mesh = V.mesh();
  const int n = mesh.n();
  Cochain out(mesh, V.kind(), 0);
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i) {
        const std::size_t src = mesh.vertex_index(
            std::clamp(i, 1, n - 1), std::clamp(j, 1, n - 1), std::clamp(k, 1, n - 1));
        out.set(mesh.vertex_index(i, j, k), V.get(src));
      }
  return out;
}

}  // namespace

Cochain ym_rhs(const Cochain& A, FlowBc bc) {
  if (A.degree() != 1) throw InvalidDegree("ym_rhs expects a 1-cochain");
  require_in_domain(A, bc, "ym_rhs");
  const Cochain B = curvature(A);
  Cochain r = (bc == FlowBc::Dirichlet)
                  ? cov_codiff(A, B, CovCodiffVariant::maximal_adjoint_of_minimal)
                  : cov_codiff(A, B, CovCodiffVariant::minimal_adjoint_of_maximal);
  if (bc != FlowBc::Marini) r = project_bc(r, constraint_of(bc));
  r *= -1.0;
  return r;
}

Cochain parabolic_rhs(const Cochain& C, FlowBc bc) {
  if (C.degree() != 1) throw InvalidDegree("parabolic_rhs expects a 1-cochain");
  if (bc == FlowBc::Marini)
    throw InvalidParameter("parabolic flow supports Dirichlet and Neumann only");
  require_in_domain(C, bc, "parabolic_rhs");
  const Cochain B = curvature(C);
  Cochain r(C.mesh(), C.kind(), 1);
  if (bc == FlowBc::Dirichlet) {
    r = cov_codiff(C, B, CovCodiffVariant::maximal_adjoint_of_minimal);
    const Cochain u = codiff(C, BcKind::DirichletTan0);
    r += cov_d(C, u, CovVariant::minimal);
  } else {
    r = cov_codiff(C, B, CovCodiffVariant::minimal_adjoint_of_maximal);
    // The boundary extension puts the velocity 0-form in the discrete
    // Neumann domain; the gauge ODE uses the same field, so the transported
    // reconstruction sees exactly the gauge term the flow applied.
    const Cochain u = neumann_extend(codiff(C, BcKind::None));
    r += cov_d(C, u, CovVariant::maximal);
  }
  r = project_bc(r, constraint_of(bc));
  r *= -1.0;
  return r;
}

Cochain x_nonlinear(const Cochain& C) {
  if (C.degree() != 1) throw InvalidDegree("x_nonlinear expects a 1-cochain");
  // Lower-order remainder of the strictly parabolic right-hand side:
  //   -(d_C* B + d_C d*C) = -(d*d + dd*)C + X(C),
  // with the interior term entering through the adjoint of [C wedge .],
  // which carries a minus relative to the wedge by ad-antisymmetry.
  const Cochain B = curvature(C);
  Cochain r = interior_bracket(C, B);
  r *= -1.0;
  Cochain ww = codiff(wedge_bracket(C, C), BcKind::None);
  axpy(-0.5, ww, r);
  const Cochain u = codiff(C, BcKind::None);
  r -= wedge_bracket(C, u);
  return r;
}

Cochain step(const Cochain& y, const std::function<Cochain(const Cochain&)>& rhs,
             Scheme scheme, double dt, BcKind projector) {
  if (scheme == Scheme::Euler) {
    Cochain k1 = rhs(y);
    Cochain out = y;
    axpy(dt, k1, out);
    return project_bc(out, projector);
  }
  // Classic RK4; every stage state is projected so rhs domain checks hold
  // exactly (the projector is linear, so this is a no-op in exact arithmetic).
  Cochain k1 = rhs(y);
  Cochain s2 = y;
  axpy(0.5 * dt, k1, s2);
  s2 = project_bc(s2, projector);
  Cochain k2 = rhs(s2);
  Cochain s3 = y;
  axpy(0.5 * dt, k2, s3);
  s3 = project_bc(s3, projector);
  Cochain k3 = rhs(s3);
  Cochain s4 = y;
  axpy(dt, k3, s4);
  s4 = project_bc(s4, projector);
  Cochain k4 = rhs(s4);
  Cochain out = y;
  axpy(dt / 6.0, k1, out);
  axpy(dt / 3.0, k2, out);
  axpy(dt / 3.0, k3, out);
  axpy(dt / 6.0, k4, out);
  return project_bc(out, projector);
}

void gauge_ode_step(GaugeField& g, const Cochain& V, double dt) {
  if (V.degree() != 0) throw InvalidDegree("gauge_ode_step expects a 0-cochain");
  if (&V.mesh() != g.mesh || V.kind() != g.kind)
    throw InvalidOperands("gauge field mismatch");
  for (std::size_t v = 0; v < g.g.size(); ++v) {
    AlgElem x = V.get(v);
    for (int c = 0; c < V.dim(); ++c) x.c[c] *= dt;
    g.g[v] = mul(exp_alg(x), g.g[v]);
  }
}

FlowRecord make_record(double t, const Cochain& A, const Cochain& Aprime, FlowBc bc) {
  FlowRecord r;
  r.t = t;
  const Cochain B = curvature(A);
  r.B_l2 = l2_norm(B);
  r.B_l3 = lp_norm(B, Lp::p3);
  r.B_l6 = lp_norm(B, Lp::p6);
  r.B_linf = lp_norm(B, Lp::inf);
  r.Aprime_l2 = l2_norm(Aprime);
  r.A_l2 = l2_norm(A);
  r.A_l4 = lp_norm(A, Lp::p4);
  r.dstarA_l2 = l2_norm(
      codiff(A, bc == FlowBc::Dirichlet ? BcKind::DirichletTan0 : BcKind::None));
  r.bc_residual_linf = boundary_component_max(B, bc != FlowBc::Dirichlet);
  r.t34_B_linf = std::pow(t, 0.75) * r.B_linf;
  if (A.kind() == GroupKind::SU2)
    r.aa_b = inner_product(wedge_bracket(Aprime, Aprime), B);
  return r;
}

namespace {

struct RunState {
  bool blew_up = false;
  double b0 = 0.0;  // initial curvature norm fixing the blow-up threshold
};

bool state_diverged(const Cochain& A, const RunState& rs) {
  const double m = max_abs(A);
  if (!std::isfinite(m)) return true;
  // Cheap sup-norm proxy between records; the threshold itself is checked on
  // the L2 curvature norm at record times.
  return m > 1e12 * (1.0 + rs.b0);
}

void record_state(Trajectory& traj, const FlowConfig& cfg, double t, const Cochain& A,
                  const Cochain& Aprime, FlowBc bc, RunState& rs) {
  FlowRecord rec = make_record(t, A, Aprime, bc);
  if (!std::isfinite(rec.B_l2) || rec.B_l2 > 1e8 * (1.0 + rs.b0)) rs.blew_up = true;
  traj.records.push_back(rec);
  if (cfg.store == StoreFields::B || cfg.store == StoreFields::AB)
    traj.B_fields.push_back(curvature(A));
  if (cfg.store == StoreFields::AB) traj.A_fields.push_back(A);
}

Trajectory integrate_plain(const FlowConfig& cfg, const Cochain& A0, FlowBc bc) {
  Trajectory traj;
  traj.cfl_warning = cfg.validate();
  const double dt = cfg.effective_dt();
  const long long nsteps = std::llround(cfg.T / dt);
  const BcKind proj = constraint_of(bc);

  auto rhs = [&](const Cochain& y) {
    return cfg.flow == FlowKind::Direct ? ym_rhs(y, bc) : parabolic_rhs(y, bc);
  };

  Cochain A = project_bc(A0, proj);
  RunState rs;
  rs.b0 = l2_norm(curvature(A));
  record_state(traj, cfg, 0.0, A, rhs(A), bc, rs);
  for (long long k = 0; k < nsteps && !rs.blew_up; ++k) {
    A = step(A, rhs, cfg.scheme, dt, proj);
    if (state_diverged(A, rs)) {
      rs.blew_up = true;
      break;
    }
    const long long done = k + 1;
    if (done % cfg.record_stride == 0 || done == nsteps)
      record_state(traj, cfg, done * dt, A, rhs(A), bc, rs);
  }
  traj.blew_up = rs.blew_up;
  traj.final_A = A;
  return traj;
}

Trajectory integrate_marini(const FlowConfig& cfg, const Cochain& A0) {
  // Collar gauge, drop the residual normal trace, evolve under the Neumann
  // flow, back-transform every record by the fixed collar gauge.
  NormalGaugeResult ng = normal_gauge(A0);
  const GaugeField ginv = inverse(ng.g);
  Cochain Ahat0 = project_bc(ng.A, BcKind::NeumannNorm0);

  Trajectory traj;
  traj.cfl_warning = cfg.validate();
  const double dt = cfg.effective_dt();
  const long long nsteps = std::llround(cfg.T / dt);

  auto rhs = [&](const Cochain& y) {
    return cfg.flow == FlowKind::Direct ? ym_rhs(y, FlowBc::Neumann)
                                        : parabolic_rhs(y, FlowBc::Neumann);
  };

  Cochain Ahat = Ahat0;
  RunState rs;
  rs.b0 = l2_norm(curvature(Ahat));
  // Diagnostics are taken in the flow's own frame: the boundary curvature
  // norms are pointwise gauge-invariant, and the collar gauge varies over a
  // single layer, so transforming first would add an O(1) discretization
  // artifact to an otherwise invariant measurement. Field outputs are still
  // transformed back.
  auto emit = [&](double t) { record_state(traj, cfg, t, Ahat, rhs(Ahat), FlowBc::Marini, rs); };
  emit(0.0);
  for (long long k = 0; k < nsteps && !rs.blew_up; ++k) {
    Ahat = step(Ahat, rhs, cfg.scheme, dt, BcKind::NeumannNorm0);
    if (state_diverged(Ahat, rs)) {
      rs.blew_up = true;
      break;
    }
    const long long done = k + 1;
    if (done % cfg.record_stride == 0 || done == nsteps) emit(done * dt);
  }
  traj.blew_up = rs.blew_up;
  traj.final_A = gauge_transform(Ahat, ginv);
  return traj;
}

}  // namespace

Trajectory integrate(const CubeMesh& mesh, const FlowConfig& cfg, const Cochain& A0) {
  if (&A0.mesh() != &mesh || A0.degree() != 1 || A0.kind() != cfg.group)
    throw InvalidOperands("initial data does not match the configuration");
  if (cfg.bc == FlowBc::Marini) return integrate_marini(cfg, A0);
  return integrate_plain(cfg, A0, cfg.bc);
}

DsResult donaldson_sadun(const CubeMesh& mesh, const FlowConfig& cfg, const Cochain& A0) {
  if (&A0.mesh() != &mesh || A0.degree() != 1 || A0.kind() != cfg.group)
    throw InvalidOperands("initial data does not match the configuration");
  if (cfg.bc == FlowBc::Marini)
    throw InvalidParameter("reconstruction supports Dirichlet and Neumann only");
  const bool warn = cfg.validate();
  const double dt = cfg.effective_dt();
  const long long nsteps = std::llround(cfg.T / dt);
  const long long eps_step = std::llround(cfg.epsilon / dt);
  const BcKind proj = constraint_of(cfg.bc);
  const BcKind dstar_bc =
      cfg.bc == FlowBc::Dirichlet ? BcKind::DirichletTan0 : BcKind::None;

  DsResult out;
  out.traj_C.cfl_warning = warn;
  out.traj_Ae.cfl_warning = warn;

  auto rhs = [&](const Cochain& y) { return parabolic_rhs(y, cfg.bc); };
  // Gauge-meaningful slope of the reconstructed state; no projection because
  // the transformed field satisfies no exact grid boundary condition.
  auto recon_slope = [&](const Cochain& Ae) {
    Cochain r = cov_codiff(Ae, curvature(Ae), CovCodiffVariant::minimal_adjoint_of_maximal);
    r *= -1.0;
    return r;
  };

  Cochain C = project_bc(A0, proj);
  GaugeField g(mesh, cfg.group);
  RunState rs;
  rs.b0 = l2_norm(curvature(C));

  auto emit = [&](long long k) {
    const double t = k * dt;
    record_state(out.traj_C, cfg, t, C, rhs(C), cfg.bc, rs);
    if (k >= eps_step) {
      const Cochain Ae = gauge_transform(C, g);
      FlowRecord rec = make_record(t, Ae, recon_slope(Ae), cfg.bc);
      out.traj_Ae.records.push_back(rec);
      if (cfg.store == StoreFields::B || cfg.store == StoreFields::AB)
        out.traj_Ae.B_fields.push_back(curvature(Ae));
      if (cfg.store == StoreFields::AB) out.traj_Ae.A_fields.push_back(Ae);
    }
  };

  emit(0);
  for (long long k = 0; k < nsteps && !rs.blew_up; ++k) {
    // Half step to the midpoint, gauge update with the midpoint velocity,
    // half step to the full grid point.
    C = step(C, rhs, cfg.scheme, 0.5 * dt, proj);
    if (k >= eps_step) {
      Cochain V = codiff(C, dstar_bc);
      if (cfg.bc == FlowBc::Neumann) V = neumann_extend(V);
      gauge_ode_step(g, V, dt);
    }
    C = step(C, rhs, cfg.scheme, 0.5 * dt, proj);
    if (state_diverged(C, rs)) {
      rs.blew_up = true;
      break;
    }
    const long long done = k + 1;
    if (done % cfg.record_stride == 0 || done == nsteps) emit(done);
  }
  out.traj_C.blew_up = rs.blew_up;
  out.traj_Ae.blew_up = rs.blew_up;
  out.traj_C.final_A = C;
  out.traj_Ae.final_A = gauge_transform(C, g);
  out.g_final = g;
  return out;
}

}  // namespace ymflow
