#include "ymflow/connection.hpp"

#include <algorithm>
#include <cmath>

namespace ymflow {

GaugeField identity_gauge(const CubeMesh& mesh, GroupKind kind) {
  return GaugeField(mesh, kind);
}

GaugeField inverse(const GaugeField& g) {
  GaugeField r = g;
  for (GroupElem& e : r.g) e = inverse(e);
  return r;
}

Cochain curvature(const Cochain& A) {
  if (A.degree() != 1) throw InvalidDegree("curvature expects a 1-cochain");
  Cochain B = d(A);
  if (A.kind() != GroupKind::U1) {
    Cochain w = wedge_bracket(A, A);
    w *= 0.5;
    B += w;
  }
  return B;
}

Cochain cov_d(const Cochain& A, const Cochain& omega, CovVariant variant) {
  if (A.degree() != 1) throw InvalidDegree("connection must be a 1-cochain");
  Cochain w = omega;
  if (variant == CovVariant::minimal) {
    const Cochain p = project_bc(omega, BcKind::DirichletTan0);
    if (max_abs_diff(p, omega) != 0.0)
      throw DomainViolation("minimal covariant derivative requires tangential-zero input");
    w = p;
  }
  Cochain out = d(w);
  if (A.kind() != GroupKind::U1) out += wedge_bracket(A, w);
  return out;
}

Cochain cov_codiff(const Cochain& A, const Cochain& omega, CovCodiffVariant variant) {
  if (A.degree() != 1) throw InvalidDegree("connection must be a 1-cochain");
  Cochain out = codiff(omega, BcKind::None);
  if (A.kind() != GroupKind::U1) out += interior_bracket(A, omega);
  if (variant == CovCodiffVariant::maximal_adjoint_of_minimal)
    out = project_bc(out, BcKind::DirichletTan0);
  return out;
}

namespace {

// Per edge: anchor vertex x and far vertex y = x + e_axis.
template <typename F>
void for_each_edge(const CubeMesh& mesh, F&& fn) {
  for (int s = 0; s < 3; ++s) {
    const auto e = mesh.extents(1, s);
    std::size_t idx = mesh.set_offset(1, s);
    for (int k = 0; k < e[2]; ++k)
      for (int j = 0; j < e[1]; ++j)
        for (int i = 0; i < e[0]; ++i, ++idx) {
          const std::size_t x = mesh.vertex_index(i, j, k);
          const std::size_t y =
              mesh.vertex_index(i + (s == 0), j + (s == 1), k + (s == 2));
          fn(idx, x, y);
        }
  }
}

}  // namespace

Cochain gauge_transform(const Cochain& A, const GaugeField& g) {
  if (A.degree() != 1) throw InvalidDegree("gauge_transform expects a 1-cochain");
  if (&A.mesh() != g.mesh || A.kind() != g.kind)
    throw InvalidOperands("gauge field mismatch");
  const double hinv = 1.0 / A.mesh().h();
  Cochain out(A.mesh(), A.kind(), 1);
  for_each_edge(A.mesh(), [&](std::size_t e, std::size_t x, std::size_t y) {
    const GroupElem gxi = inverse(g.g[x]);
    const AlgElem a = A.get(e);
    const AlgElem rx = ad_action(gxi, a);
    const AlgElem ry = ad_action(inverse(g.g[y]), a);
    const AlgElem dg = log_group(mul(gxi, g.g[y]));
    AlgElem v = alg_zero(A.kind());
    for (int c = 0; c < A.dim(); ++c) v.c[c] = 0.5 * (rx.c[c] + ry.c[c]) + hinv * dg.c[c];
    out.set(e, v);
  });
  return out;
}

Cochain gauge_rotate(const Cochain& omega, const GaugeField& g) {
  if (omega.degree() != 1) throw InvalidDegree("gauge_rotate expects a 1-cochain");
  if (&omega.mesh() != g.mesh || omega.kind() != g.kind)
    throw InvalidOperands("gauge field mismatch");
  Cochain out(omega.mesh(), omega.kind(), 1);
  for_each_edge(omega.mesh(), [&](std::size_t e, std::size_t x, std::size_t y) {
    const AlgElem a = omega.get(e);
    const AlgElem rx = ad_action(inverse(g.g[x]), a);
    const AlgElem ry = ad_action(inverse(g.g[y]), a);
    AlgElem v = alg_zero(omega.kind());
    for (int c = 0; c < omega.dim(); ++c) v.c[c] = 0.5 * (rx.c[c] + ry.c[c]);
    out.set(e, v);
  });
  return out;
}

Cochain pure_gauge(const GaugeField& g) {
  if (g.mesh == nullptr) throw InvalidOperands("empty gauge field");
  const double hinv = 1.0 / g.mesh->h();
  Cochain out(*g.mesh, g.kind, 1);
  for_each_edge(*g.mesh, [&](std::size_t e, std::size_t x, std::size_t y) {
    const AlgElem dg = log_group(mul(inverse(g.g[x]), g.g[y]));
    AlgElem v = alg_zero(g.kind);
    for (int c = 0; c < algebra_dim(g.kind); ++c) v.c[c] = hinv * dg.c[c];
    out.set(e, v);
  });
  return out;
}

namespace {

// Transformed value of one edge with original value u, endpoint gauges
// (tail ga, head gb): (1/2)(Ad_{ga^-1} + Ad_{gb^-1}) u + (1/h) log(ga^-1 gb).
AlgElem transformed_edge(const AlgElem& u, const GroupElem& ga, const GroupElem& gb,
                         double h) {
  AlgElem r = ad_action(inverse(ga), u);
  const AlgElem rb = ad_action(inverse(gb), u);
  for (int c = 0; c < 3; ++c) r.c[c] = 0.5 * (r.c[c] + rb.c[c]);
  const AlgElem lg = log_group(mul(inverse(ga), gb));
  for (int c = 0; c < 3; ++c) r.c[c] += lg.c[c] / h;
  return r;
}

}  // namespace

NormalGaugeResult normal_gauge(const Cochain& A) {
  if (A.degree() != 1) throw InvalidDegree("normal_gauge expects a 1-cochain");
  const CubeMesh& mesh = A.mesh();
  const int n = mesh.n();
  const double h = mesh.h();
  NormalGaugeResult res{identity_gauge(mesh, A.kind()), Cochain(mesh, A.kind(), 1), 0.0};

  // Faces in claim order: x-, x+, y-, y+, z-, z+. A depth-1 vertex takes its
  // gauge value from the first face that reaches it; for the edge and corner
  // collars, where a vertex serves several faces, the remaining perpendicular
  // edges are zeroed through the gauge of their boundary anchor instead. The
  // anchor participates in exactly one perpendicular edge, so the second pass
  // never creates new conflicts.
  std::vector<bool> claimed(mesh.vertex_count(), false);
  struct Fixup {
    std::size_t edge, wall, inner;
    bool high;
  };
  std::vector<Fixup> fixups;
  std::vector<std::size_t> first_layer;  // all face-anchored perpendicular edges
  for (int face = 0; face < 6; ++face) {
    const int axis = face / 2;
    const bool high = (face % 2) != 0;
    const int in_coord = high ? n - 1 : 1;  // depth-1 layer coordinate on axis
    for (int b = 0; b <= n; ++b)
      for (int a = 0; a <= n; ++a) {
        // (a, b) run over the two transverse axes in ascending axis order.
        int vi = 0, vj = 0, vk = 0;
        if (axis == 0) { vi = in_coord; vj = a; vk = b; }
        if (axis == 1) { vj = in_coord; vi = a; vk = b; }
        if (axis == 2) { vk = in_coord; vi = a; vj = b; }
        // Edges anchored on the boundary of the face itself stay untouched.
        if (vi == 0 || vi == n || vj == 0 || vj == n || vk == 0 || vk == n) continue;
        const std::size_t w = mesh.vertex_index(vi, vj, vk);
        // Perpendicular edge between w and its boundary neighbour.
        int ei = vi, ej = vj, ek = vk, wi = vi, wj = vj, wk = vk;
        if (high) {
          if (axis == 0) wi = n;
          if (axis == 1) wj = n;
          if (axis == 2) wk = n;
        } else {
          if (axis == 0) ei = wi = 0;
          if (axis == 1) ej = wj = 0;
          if (axis == 2) ek = wk = 0;
        }
        const std::size_t edge =
            mesh.set_offset(1, axis) + mesh.set_index(1, axis, ei, ej, ek);
        first_layer.push_back(edge);
        if (claimed[w]) {
          fixups.push_back({edge, mesh.vertex_index(wi, wj, wk), w, high});
          continue;
        }
        claimed[w] = true;
        AlgElem v = A.get(edge);
        const double sgn = high ? h : -h;
        for (int c = 0; c < A.dim(); ++c) v.c[c] *= sgn;
        res.g.g[w] = exp_alg(v);
      }
  }

  // Zero each leftover edge by its anchor gauge: with the inner gauge G fixed,
  // solve transformed_edge == 0 for the anchor by fixed-point iteration
  // (contraction factor O(h |A|)).
  for (const Fixup& f : fixups) {
    const AlgElem u = A.get(f.edge);
    const GroupElem G = res.g.g[f.inner];
    GroupElem gx = G;
    for (int it = 0; it < 60; ++it) {
      AlgElem m = f.high ? transformed_edge(u, G, gx, h) : transformed_edge(u, gx, G, h);
      if (alg_norm(m) <= 1e-15) break;
      // Absorb the residual into the anchor's log, oriented with the edge.
      AlgElem corr = m;
      for (int c = 0; c < 3; ++c) corr.c[c] *= f.high ? -h : h;
      gx = renormalize(mul(gx, exp_alg(corr)));
    }
    res.g.g[f.wall] = gx;
  }

  res.A = gauge_transform(A, res.g);

  double worst = 0.0;
  for (std::size_t e : first_layer) worst = std::max(worst, alg_norm(res.A.get(e)));
  res.conflict_residual = worst;
  return res;
}

}  // namespace ymflow
