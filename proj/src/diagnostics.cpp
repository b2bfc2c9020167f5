#include "ymflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "ymflow/errors.hpp"
#include "ymflow/fields.hpp"

namespace ymflow {

GFConstants gf_constants(GroupKind kind, double kappa_hat) {
  GFConstants g;
  g.lambda_M = 1.0;
  g.c = ad_norm(kind);
  g.kappa_hat = kappa_hat;
  return g;
}

std::vector<double> cumulative_integral(const std::vector<double>& f, double dt) {
  const std::size_t m = f.size();
  std::vector<double> out(m, 0.0);
  if (m < 2) return out;
  if (m < 4) {
    for (std::size_t i = 1; i < m; ++i)
      out[i] = out[i - 1] + 0.5 * dt * (f[i - 1] + f[i]);
    return out;
  }
  for (std::size_t i = 0; i + 1 < m; ++i) {
    double inc;
    if (i == 0)
      inc = dt * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]) / 24.0;
    else if (i + 2 >= m)
      inc = dt * (f[m - 4] - 5.0 * f[m - 3] + 19.0 * f[m - 2] + 9.0 * f[m - 1]) / 24.0;
    else
      inc = dt * (-f[i - 1] + 13.0 * f[i] + 13.0 * f[i + 1] - f[i + 2]) / 24.0;
    out[i + 1] = out[i] + inc;
  }
  return out;
}

namespace {

std::vector<double> record_times(const Trajectory& traj) {
  std::vector<double> ts;
  ts.reserve(traj.records.size());
  for (const auto& r : traj.records) ts.push_back(r.t);
  return ts;
}

bool uniform_spacing(const std::vector<double>& ts, double& dt) {
  if (ts.size() < 2) return false;
  dt = ts[1] - ts[0];
  for (std::size_t i = 2; i < ts.size(); ++i)
    if (std::abs((ts[i] - ts[i - 1]) - dt) > 1e-9 * std::max(dt, 1.0)) return false;
  return dt > 0.0;
}

// Cumulative integral over the record grid; fourth-order when the grid is
// uniform, trapezoid otherwise (a trailing short interval falls back too).
std::vector<double> cumulative_records(const std::vector<double>& ts,
                                       const std::vector<double>& fs) {
  double dt = 0.0;
  if (uniform_spacing(ts, dt)) return cumulative_integral(fs, dt);
  std::vector<double> out(fs.size(), 0.0);
  for (std::size_t i = 1; i < fs.size(); ++i)
    out[i] = out[i - 1] + 0.5 * (ts[i] - ts[i - 1]) * (fs[i - 1] + fs[i]);
  return out;
}

// Integral of the piecewise-linear interpolant of (ts, fs) over [a, b].
double integral_pl(const std::vector<double>& ts, const std::vector<double>& fs,
                   double a, double b) {
  const double lo = ts.front(), hi = ts.back();
  const double tol = 1e-9 * std::max(1.0, hi - lo);
  if (a > b + tol || a < lo - tol || b > hi + tol)
    throw InvalidParameter("quadrature range outside the recorded time span");
  a = std::clamp(a, lo, hi);
  b = std::clamp(b, lo, hi);
  auto value_at = [&](double t, std::size_t seg) {
    const double w = (ts[seg + 1] == ts[seg])
                         ? 0.0
                         : (t - ts[seg]) / (ts[seg + 1] - ts[seg]);
    return fs[seg] + w * (fs[seg + 1] - fs[seg]);
  };
  double acc = 0.0;
  for (std::size_t s = 0; s + 1 < ts.size(); ++s) {
    const double l = std::max(a, ts[s]), r = std::min(b, ts[s + 1]);
    if (r <= l) continue;
    acc += 0.5 * (r - l) * (value_at(l, s) + value_at(r, s));
  }
  return acc;
}

// ||B'(t_k)||_2 by time differences of stored curvature fields.
std::vector<double> curvature_slopes(const Trajectory& traj) {
  const auto& B = traj.B_fields;
  const auto& rec = traj.records;
  if (B.size() != rec.size() || B.size() < 3)
    throw InvalidParameter("needs a trajectory with stored curvature fields (>= 3 records)");
  std::vector<double> out(B.size());
  for (std::size_t k = 0; k < B.size(); ++k) {
    const std::size_t lo = k == 0 ? 0 : k - 1;
    const std::size_t hi = k + 1 == B.size() ? k : k + 1;
    Cochain diff = B[hi];
    diff -= B[lo];
    out[k] = l2_norm(diff) / (rec[hi].t - rec[lo].t);
  }
  return out;
}

}  // namespace

std::vector<double> action_alpha(const Trajectory& traj) {
  const auto& rec = traj.records;
  std::vector<double> alpha(rec.size(), 0.0);
  for (std::size_t k = 1; k < rec.size(); ++k) {
    const double u0 = std::sqrt(rec[k - 1].t), u1 = std::sqrt(rec[k].t);
    const double f0 = rec[k - 1].B_l2 * rec[k - 1].B_l2;
    const double f1 = rec[k].B_l2 * rec[k].B_l2;
    alpha[k] = alpha[k - 1] + (u1 - u0) * (f0 + f1);  // 2 du x midpoint of f
  }
  return alpha;
}

double psi(const Trajectory& traj, double s, double t, const GFConstants& consts) {
  const auto ts = record_times(traj);
  if (ts.empty()) throw InvalidParameter("empty trajectory");
  std::vector<double> f(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i)
    f[i] = traj.records[i].B_l3 * traj.records[i].B_l3;
  const double kc = consts.kappa_hat * consts.c;
  return (t - s) * consts.lambda_M + 2.0 * kc * kc * integral_pl(ts, f, s, t);
}

DefectReport check_energy_identity(const Trajectory& traj) {
  DefectReport rep;
  const auto& rec = traj.records;
  if (rec.empty()) return rep;
  const auto ts = record_times(traj);
  std::vector<double> fs(rec.size());
  for (std::size_t i = 0; i < rec.size(); ++i)
    fs[i] = rec[i].Aprime_l2 * rec[i].Aprime_l2;
  const auto I = cumulative_records(ts, fs);
  const double b0sq = rec.front().B_l2 * rec.front().B_l2;
  const double denom = b0sq > 0.0 ? b0sq : 1.0;
  rep.defect.resize(rec.size());
  for (std::size_t k = 0; k < rec.size(); ++k) {
    const double lhs = rec[k].B_l2 * rec[k].B_l2 + 2.0 * I[k];
    rep.defect[k] = std::abs(lhs - b0sq) / denom;
    rep.max_defect = std::max(rep.max_defect, rep.defect[k]);
  }
  rep.final_defect = rep.defect.back();
  return rep;
}

DefectReport check_fa10(const Trajectory& traj) {
  DefectReport rep;
  const auto& rec = traj.records;
  if (rec.empty()) return rep;
  const auto alpha = action_alpha(traj);
  rep.defect.resize(rec.size(), 0.0);
  double J = 0.0;  // integral of sqrt(s) ||A'||^2 via u-substitution
  for (std::size_t k = 0; k < rec.size(); ++k) {
    if (k > 0) {
      const double u0 = std::sqrt(rec[k - 1].t), u1 = std::sqrt(rec[k].t);
      const double g0 = rec[k - 1].t * rec[k - 1].Aprime_l2 * rec[k - 1].Aprime_l2;
      const double g1 = rec[k].t * rec[k].Aprime_l2 * rec[k].Aprime_l2;
      J += (u1 - u0) * (g0 + g1);  // 2 u^2 ||A'||^2 du, trapezoid halves the 2
    }
    const double lhs = std::sqrt(rec[k].t) * rec[k].B_l2 * rec[k].B_l2 + 2.0 * J;
    const double rhs = 0.5 * alpha[k];
    const double denom = std::max(rhs, 1e-30);
    rep.defect[k] = std::abs(lhs - rhs) / denom;
    rep.max_defect = std::max(rep.max_defect, rep.defect[k]);
  }
  rep.final_defect = rep.defect.back();
  return rep;
}

Order1Report check_order1_bound(const Trajectory& traj, const GFConstants& consts) {
  Order1Report rep;
  const auto& rec = traj.records;
  const auto ts = record_times(traj);
  const auto Bp = curvature_slopes(traj);
  std::vector<double> b3sq(rec.size());
  for (std::size_t i = 0; i < rec.size(); ++i) b3sq[i] = rec[i].B_l3 * rec[i].B_l3;
  const auto G = cumulative_records(ts, b3sq);  // integral of ||B||_3^2
  const double kc = consts.kappa_hat * consts.c;
  const double b0sq = rec.front().B_l2 * rec.front().B_l2;

  rep.pass = true;
  rep.weak_pass = true;
  for (std::size_t k = 1; k < rec.size(); ++k) {
    auto psi_to_k = [&](std::size_t i) {
      return (ts[k] - ts[i]) * consts.lambda_M + 2.0 * kc * kc * (G[k] - G[i]);
    };
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 <= k; ++i) {
      const double w0 = std::exp(psi_to_k(i)) * ts[i] * Bp[i] * Bp[i];
      const double w1 = std::exp(psi_to_k(i + 1)) * ts[i + 1] * Bp[i + 1] * Bp[i + 1];
      integral += 0.5 * (ts[i + 1] - ts[i]) * (w0 + w1);
    }
    const double weak_lhs = ts[k] * rec[k].Aprime_l2 * rec[k].Aprime_l2;
    const double lhs = weak_lhs + integral;
    const double rhs = std::exp(psi_to_k(0)) * b0sq / 2.0;
    if (rhs <= 0.0) {
      if (lhs > 1e-30) rep.pass = rep.weak_pass = false;
      continue;
    }
    rep.max_ratio = std::max(rep.max_ratio, lhs / rhs);
    if (lhs > rhs * 1.05) rep.pass = false;
    if (weak_lhs > rhs * 1.05) rep.weak_pass = false;
  }
  return rep;
}

double check_slope_identity(const Trajectory& traj) {
  const auto& rec = traj.records;
  const auto Bp = curvature_slopes(traj);
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < rec.size(); ++k) {
    const double ap0 = rec[k - 1].Aprime_l2 * rec[k - 1].Aprime_l2;
    const double ap1 = rec[k + 1].Aprime_l2 * rec[k + 1].Aprime_l2;
    const double dap = (ap1 - ap0) / (rec[k + 1].t - rec[k - 1].t);
    const double resid = dap + 2.0 * Bp[k] * Bp[k] + 2.0 * rec[k].aa_b;
    const double scale = std::max({std::abs(dap), 2.0 * Bp[k] * Bp[k],
                                   2.0 * std::abs(rec[k].aa_b), 1e-30});
    worst = std::max(worst, std::abs(resid) / scale);
  }
  return worst;
}

namespace {

// Vertexwise components of a collocated 1- or 2-form as a 3-slot algebra
// vector; 2-forms are relabeled through their dual axis (xy->z, xz->-y,
// yz->x), under which the curvature pairing keeps the 1-form shape.
void dual_components(const VertexField& w, int degree, std::size_t v,
                     GroupKind kind, AlgElem out[3]) {
  for (int s = 0; s < 3; ++s) {
    AlgElem e = alg_zero(kind);
    for (int c = 0; c < w.dim; ++c) e.c[c] = w.at(s, v, c);
    out[s] = e;
  }
  if (degree == 2) {
    // face sets in mask order: {xy, xz, yz} -> dual axes {z, y, x}
    AlgElem z = out[0], y = out[1], x = out[2];
    for (int c = 0; c < w.dim; ++c) y.c[c] = -y.c[c];
    out[0] = x;
    out[1] = y;
    out[2] = z;
  }
}

}  // namespace

double curvature_pairing(const Cochain& B, const Cochain& omega) {
  if (B.degree() != 2) throw InvalidDegree("curvature_pairing expects a 2-cochain B");
  if (omega.degree() != 1 && omega.degree() != 2)
    throw InvalidDegree("curvature_pairing supports 1- and 2-forms");
  if (&B.mesh() != &omega.mesh() || B.kind() != omega.kind())
    throw InvalidOperands("operand mismatch");
  if (B.kind() == GroupKind::U1) return 0.0;
  const CubeMesh& mesh = B.mesh();
  const VertexField Bv = collocate(B);
  const VertexField wv = collocate(omega);
  const double w3 = mesh.h() * mesh.h() * mesh.h();
  double acc = 0.0;
  for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
    // B_kj at the vertex: stored faces {xy, xz, yz} give B_01, B_02, B_12.
    AlgElem Bc[3];
    for (int s = 0; s < 3; ++s) {
      AlgElem e = alg_zero(B.kind());
      for (int c = 0; c < Bv.dim; ++c) e.c[c] = Bv.at(s, v, c);
      Bc[s] = e;
    }
    auto B_at = [&](int k, int j) {  // antisymmetric lookup
      static const int slot[3][3] = {{-1, 0, 1}, {0, -1, 2}, {1, 2, -1}};
      AlgElem e = Bc[slot[k][j]];
      if (k > j)
        for (int c = 0; c < 3; ++c) e.c[c] = -e.c[c];
      return e;
    };
    AlgElem wc[3];
    dual_components(wv, omega.degree(), v, omega.kind(), wc);
    for (int j = 0; j < 3; ++j) {
      AlgElem bw = alg_zero(omega.kind());
      for (int k = 0; k < 3; ++k) {
        if (k == j) continue;
        const AlgElem br = bracket(B_at(k, j), wc[k]);
        for (int c = 0; c < 3; ++c) bw.c[c] += br.c[c];
      }
      acc += w3 * inner(bw, wc[j]);
    }
  }
  return acc;
}

GaffneyReport gaffney_check(const Cochain& A, const Cochain& omega, BcKind bc,
                            const GFConstants& consts) {
  if (bc == BcKind::None)
    throw InvalidParameter("gaffney_check needs a Dirichlet or Neumann projection");
  if (omega.degree() != 1 && omega.degree() != 2)
    throw InvalidDegree("gaffney_check supports 1- and 2-forms");
  if (max_abs_diff(project_bc(omega, bc), omega) != 0.0)
    throw DomainViolation("omega must lie in the boundary-condition subspace");

  GaffneyReport r;
  r.grad_sq = grad_l2sq(covariant_grad(A, omega), omega.mesh());
  const bool dir = bc == BcKind::DirichletTan0;
  const Cochain dA =
      cov_d(A, omega, dir ? CovVariant::minimal : CovVariant::maximal);
  r.d_sq = inner_product(dA, dA);
  const Cochain dS = cov_codiff(A, omega,
                                dir ? CovCodiffVariant::maximal_adjoint_of_minimal
                                    : CovCodiffVariant::minimal_adjoint_of_maximal);
  r.dstar_sq = inner_product(dS, dS);
  const Cochain B = curvature(A);
  r.pairing = curvature_pairing(B, omega);

  const double rhs = r.d_sq + r.dstar_sq - r.pairing;
  const double scale = std::max({r.grad_sq, r.d_sq + r.dstar_sq, 1e-30});
  r.defect = std::abs(r.grad_sq - rhs) / scale;

  const double l2sq = inner_product(omega, omega);
  r.gf_lhs = 0.5 * (r.grad_sq + l2sq);
  r.gf_rhs = r.d_sq + r.dstar_sq + consts.lambda3(lp_norm(B, Lp::p3)) * l2sq;
  r.gf_pass = r.gf_lhs <= r.gf_rhs * (1.0 + 1e-12) + 1e-30;
  return r;
}

KappaReport sobolev_kappa(const CubeMesh& mesh, GroupKind kind, BcKind bc,
                          std::uint64_t seed) {
  const Cochain A0(mesh, kind, 1);
  KappaReport rep;
  double best = 0.0;
  auto consider = [&](const Cochain& om, const char* kind_tag, int idx) {
    const double l2sq = inner_product(om, om);
    if (l2sq <= 0.0) return;
    const double l6 = lp_norm(om, Lp::p6);
    const double gsq = grad_l2sq(covariant_grad(A0, om), mesh);
    const double ratio = l6 * l6 / (gsq + l2sq);
    if (ratio > best) {
      best = ratio;
      rep.max_tag = std::string(kind_tag) + "-" + std::to_string(idx);
    }
  };
  for (int t = 0; t < 200; ++t)
    consider(random_smooth(mesh, kind, 1, bc, seed + t, 1.0, 3), "smooth", t);
  for (int t = 0; t < 50; ++t)
    consider(project_bc(coordinate_bump(mesh, kind, 1, t, 1.0), bc), "bump", t);
  rep.kappa_hat = std::sqrt(2.0 * best);
  return rep;
}

double wilson_loop(const Cochain& A, const LoopSpec& loop) {
  if (A.degree() != 1) throw InvalidDegree("wilson_loop expects a 1-cochain");
  const CubeMesh& mesh = A.mesh();
  const int n = mesh.n();
  int ax0, ax1;
  switch (loop.plane) {
    case LoopPlane::xy: ax0 = 0; ax1 = 1; break;
    case LoopPlane::yz: ax0 = 1; ax1 = 2; break;
    default: ax0 = 2; ax1 = 0; break;
  }
  int pos[3] = {loop.i, loop.j, loop.k};
  if (loop.a < 1 || loop.b < 1) throw InvalidCell("loop sides must be at least 1");
  for (int a = 0; a < 3; ++a)
    if (pos[a] < 0 || pos[a] > n) throw InvalidCell("loop anchor outside the mesh");
  if (pos[ax0] + loop.a > n || pos[ax1] + loop.b > n)
    throw InvalidCell("loop extends past the mesh");

  const double h = mesh.h();
  GroupElem P = group_identity(A.kind());
  auto link = [&](int axis, int sign) {
    int e[3] = {pos[0], pos[1], pos[2]};
    if (sign < 0) e[axis] -= 1;
    const std::size_t cell =
        mesh.set_offset(1, axis) + mesh.set_index(1, axis, e[0], e[1], e[2]);
    AlgElem a = A.get(cell);
    for (int c = 0; c < A.dim(); ++c) a.c[c] *= sign * h;
    P = mul(P, exp_alg(a));
    pos[axis] += sign;
  };
  for (int s = 0; s < loop.a; ++s) link(ax0, +1);
  for (int s = 0; s < loop.b; ++s) link(ax1, +1);
  for (int s = 0; s < loop.a; ++s) link(ax0, -1);
  for (int s = 0; s < loop.b; ++s) link(ax1, -1);
  return trace_re(P);
}

std::vector<WilsonRow> regularized_wilson(const CubeMesh& mesh, const FlowConfig& cfg,
                                          const Cochain& A0,
                                          const std::vector<double>& t_eval,
                                          const std::vector<LoopSpec>& loops) {
  std::vector<WilsonRow> rows;
  rows.reserve(t_eval.size() * loops.size());
  for (const double t : t_eval) {
    std::optional<Cochain> At;
    if (t <= 0.0) {
      At = A0;
    } else {
      FlowConfig sub = cfg;
      sub.T = t;
      sub.record_stride = 1 << 28;  // endpoints only
      sub.store = StoreFields::None;
      Trajectory traj = integrate(mesh, sub, A0);
      if (traj.blew_up) throw BlowUpDetected("flow diverged before the evaluation time");
      At = std::move(traj.final_A);
    }
    for (std::size_t li = 0; li < loops.size(); ++li) {
      WilsonRow row;
      row.loop_id = static_cast<int>(li);
      row.loop = loops[li];
      row.t = t;
      row.W = wilson_loop(*At, loops[li]);
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace ymflow
