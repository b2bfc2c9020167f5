#include "ymflow/algebra.hpp"

#include <cmath>

namespace ymflow {

namespace {

void require_same_kind(GroupKind a, GroupKind b) {
  if (a != b) throw InvalidOperands("mixed group kinds");
}

// sin(x)/x with the removable singularity handled by series.
double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

}  // namespace

AlgElem bracket(const AlgElem& x, const AlgElem& y) {
  require_same_kind(x.kind, y.kind);
  AlgElem r = alg_zero(x.kind);
  if (x.kind == GroupKind::SU2) {
    r.c[0] = x.c[1] * y.c[2] - x.c[2] * y.c[1];
    r.c[1] = x.c[2] * y.c[0] - x.c[0] * y.c[2];
    r.c[2] = x.c[0] * y.c[1] - x.c[1] * y.c[0];
  }
  return r;
}

double inner(const AlgElem& x, const AlgElem& y) {
  require_same_kind(x.kind, y.kind);
  double s = 0.0;
  for (int a = 0; a < algebra_dim(x.kind); ++a) s += x.c[a] * y.c[a];
  return s;
}

double alg_norm(const AlgElem& x) { return std::sqrt(inner(x, x)); }

double ad_norm(GroupKind k) { return k == GroupKind::U1 ? 0.0 : 1.0; }

GroupElem group_identity(GroupKind k) { return GroupElem{k, {1.0, 0.0, 0.0, 0.0}}; }

double unitarity_drift(const GroupElem& g) {
  double n2 = g.q[0] * g.q[0] + g.q[1] * g.q[1];
  if (g.kind == GroupKind::SU2) n2 += g.q[2] * g.q[2] + g.q[3] * g.q[3];
  return std::abs(std::sqrt(n2) - 1.0);
}

GroupElem renormalize(const GroupElem& g) {
  double n2 = g.q[0] * g.q[0] + g.q[1] * g.q[1];
  if (g.kind == GroupKind::SU2) n2 += g.q[2] * g.q[2] + g.q[3] * g.q[3];
  const double s = 1.0 / std::sqrt(n2);
  GroupElem r = g;
  for (double& v : r.q) v *= s;
  if (g.kind == GroupKind::U1) r.q[2] = r.q[3] = 0.0;
  return r;
}

GroupElem mul(const GroupElem& a, const GroupElem& b) {
  require_same_kind(a.kind, b.kind);
  GroupElem r;
  r.kind = a.kind;
  if (a.kind == GroupKind::U1) {
    r.q = {a.q[0] * b.q[0] - a.q[1] * b.q[1], a.q[0] * b.q[1] + a.q[1] * b.q[0], 0.0, 0.0};
  } else {
    const auto& p = a.q;
    const auto& q = b.q;
    r.q = {p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3],
           p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2],
           p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1],
           p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0]};
  }
  if (unitarity_drift(r) > 1e-13) r = renormalize(r);
  return r;
}

GroupElem inverse(const GroupElem& g) {
  GroupElem r = g;
  for (int a = 1; a < 4; ++a) r.q[a] = -r.q[a];
  return r;
}

AlgElem ad_action(const GroupElem& g, const AlgElem& x) {
  require_same_kind(g.kind, x.kind);
  if (g.kind == GroupKind::U1) return x;
  // Rotate the coefficient vector by the quaternion: v' = q v q^{-1}.
  const double w = g.q[0], qx = g.q[1], qy = g.q[2], qz = g.q[3];
  const double vx = x.c[0], vy = x.c[1], vz = x.c[2];
  // t = 2 q_vec x v
  const double tx = 2.0 * (qy * vz - qz * vy);
  const double ty = 2.0 * (qz * vx - qx * vz);
  const double tz = 2.0 * (qx * vy - qy * vx);
  AlgElem r = alg_zero(GroupKind::SU2);
  r.c[0] = vx + w * tx + (qy * tz - qz * ty);
  r.c[1] = vy + w * ty + (qz * tx - qx * tz);
  r.c[2] = vz + w * tz + (qx * ty - qy * tx);
  return r;
}

GroupElem exp_alg(const AlgElem& x) {
  GroupElem g;
  g.kind = x.kind;
  if (x.kind == GroupKind::U1) {
    g.q = {std::cos(x.c[0]), std::sin(x.c[0]), 0.0, 0.0};
    return g;
  }
  const double th = alg_norm(x);
  const double half = 0.5 * th;
  const double s = 0.5 * sinc(half);  // sin(th/2)/th
  g.q = {std::cos(half), s * x.c[0], s * x.c[1], s * x.c[2]};
  return g;
}

AlgElem log_group(const GroupElem& g) {
  AlgElem x = alg_zero(g.kind);
  if (g.kind == GroupKind::U1) {
    const double phase = std::atan2(g.q[1], g.q[0]);
    if (std::abs(phase) >= M_PI - 1e-6)
      throw LogBranchError("U1 element too close to the cut locus at phase pi");
    x.c[0] = phase;
    return x;
  }
  const double vn = std::sqrt(g.q[1] * g.q[1] + g.q[2] * g.q[2] + g.q[3] * g.q[3]);
  const double angle = 2.0 * std::atan2(vn, g.q[0]);  // rotation angle |x|
  if (angle >= M_PI - 1e-6)
    throw LogBranchError("SU2 element too close to the cut locus (rotation angle >= pi)");
  const double scale = (vn > 1e-300) ? angle / vn : 2.0;  // at vn ~ 0, angle/vn -> 2
  x.c[0] = scale * g.q[1];
  x.c[1] = scale * g.q[2];
  x.c[2] = scale * g.q[3];
  return x;
}

double trace_re(const GroupElem& g) {
  return g.kind == GroupKind::U1 ? g.q[0] : 2.0 * g.q[0];
}

}  // namespace ymflow
