#include "ymflow/forms.hpp"

#include <algorithm>
#include <cmath>

namespace ymflow {

namespace {

void require_compatible(const Cochain& a, const Cochain& b) {
  if (&a.mesh() != &b.mesh() || a.kind() != b.kind() || a.degree() != b.degree())
    throw InvalidOperands("cochain shape mismatch");
}

int set_pos(int degree, int mask) {
  const auto& sets = direction_sets()[degree];
  for (int s = 0; s < static_cast<int>(sets.size()); ++s)
    if (sets[s] == mask) return s;
  throw InvalidCell("no such direction set at this degree");
}

// Shuffle sign of ({s}, T): parity of |{b in T : b < s}|.
int shuffle_sign(int s, int tmask) {
  int below = tmask & ((1 << s) - 1);
  return (__builtin_popcount(below) % 2 == 0) ? 1 : -1;
}

}  // namespace

Cochain::Cochain(const CubeMesh& mesh, GroupKind kind, int degree)
    : mesh_(&mesh), kind_(kind), degree_(degree), dim_(algebra_dim(kind)) {
  if (degree < 0 || degree > 3) throw InvalidDegree("cochain degree must be in [0,3]");
  values_.assign(mesh.cell_count(degree) * dim_, 0.0);
}

AlgElem Cochain::get(std::size_t cell) const {
  AlgElem v = alg_zero(kind_);
  for (int a = 0; a < dim_; ++a) v.c[a] = values_[cell * dim_ + a];
  return v;
}

void Cochain::set(std::size_t cell, const AlgElem& v) {
  if (v.kind != kind_) throw InvalidOperands("algebra element kind mismatch");
  for (int a = 0; a < dim_; ++a) values_[cell * dim_ + a] = v.c[a];
}

void Cochain::set_zero() { std::fill(values_.begin(), values_.end(), 0.0); }

Cochain& Cochain::operator+=(const Cochain& o) {
  require_compatible(*this, o);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

Cochain& Cochain::operator-=(const Cochain& o) {
  require_compatible(*this, o);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

Cochain& Cochain::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

Cochain operator+(Cochain a, const Cochain& b) { return a += b; }
Cochain operator-(Cochain a, const Cochain& b) { return a -= b; }
Cochain operator*(double s, Cochain a) { return a *= s; }

void axpy(double a, const Cochain& x, Cochain& y) {
  require_compatible(x, y);
  const double* xd = x.data();
  double* yd = y.data();
  for (std::size_t i = 0; i < x.value_count(); ++i) yd[i] += a * xd[i];
}

double max_abs(const Cochain& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.value_count(); ++i) m = std::max(m, std::abs(a.data()[i]));
  return m;
}

double max_abs_diff(const Cochain& a, const Cochain& b) {
  require_compatible(a, b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.value_count(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

Cochain d(const Cochain& omega) {
  const int p = omega.degree();
  if (p >= 3) throw InvalidDegree("d undefined for degree 3 cochains");
  const CubeMesh& mesh = omega.mesh();
  Cochain out(mesh, omega.kind(), p + 1);
  const int dim = out.dim();
  const double hinv = 1.0 / mesh.h();
  const auto& osets = direction_sets()[p + 1];
  for (int s = 0; s < static_cast<int>(osets.size()); ++s) {
    const int mask = osets[s];
    const auto e = mesh.extents(p + 1, s);
    std::size_t idx = mesh.set_offset(p + 1, s);
    // Precompute per-axis source info.
    struct Leg { int t; int sign; int da[3]; };
    Leg legs[3];
    int nlegs = 0;
    for (int a = 0; a < 3; ++a) {
      if (!(mask >> a & 1)) continue;
      Leg& l = legs[nlegs];
      l.t = set_pos(p, mask & ~(1 << a));
      l.sign = (nlegs % 2 == 0) ? 1 : -1;
      l.da[0] = (a == 0);
      l.da[1] = (a == 1);
      l.da[2] = (a == 2);
      ++nlegs;
    }
    for (int k = 0; k < e[2]; ++k)
      for (int j = 0; j < e[1]; ++j)
        for (int i = 0; i < e[0]; ++i, ++idx) {
          for (int c = 0; c < dim; ++c) {
            double acc = 0.0;
            for (int m = 0; m < nlegs; ++m) {
              const Leg& l = legs[m];
              const std::size_t near_i =
                  mesh.set_offset(p, l.t) + mesh.set_index(p, l.t, i, j, k);
              const std::size_t far_i =
                  mesh.set_offset(p, l.t) +
                  mesh.set_index(p, l.t, i + l.da[0], j + l.da[1], k + l.da[2]);
              acc += l.sign * (omega.at(far_i, c) - omega.at(near_i, c));
            }
            out.at(idx, c) = hinv * acc;
          }
        }
  }
  return out;
}

namespace {

// Transpose of the coboundary (with its 1/h factor): degree p -> p-1.
Cochain d_transpose(const Cochain& omega) {
  const int p = omega.degree();
  if (p <= 0) throw InvalidDegree("codiff undefined for degree 0 cochains");
  const CubeMesh& mesh = omega.mesh();
  Cochain out(mesh, omega.kind(), p - 1);
  const int dim = out.dim();
  const double hinv = 1.0 / mesh.h();
  const auto& ssets = direction_sets()[p];
  for (int s = 0; s < static_cast<int>(ssets.size()); ++s) {
    const int mask = ssets[s];
    const auto e = mesh.extents(p, s);
    std::size_t idx = mesh.set_offset(p, s);
    struct Leg { int t; int sign; int da[3]; };
    Leg legs[3];
    int nlegs = 0;
    for (int a = 0; a < 3; ++a) {
      if (!(mask >> a & 1)) continue;
      Leg& l = legs[nlegs];
      l.t = set_pos(p - 1, mask & ~(1 << a));
      l.sign = (nlegs % 2 == 0) ? 1 : -1;
      l.da[0] = (a == 0);
      l.da[1] = (a == 1);
      l.da[2] = (a == 2);
      ++nlegs;
    }
    for (int k = 0; k < e[2]; ++k)
      for (int j = 0; j < e[1]; ++j)
        for (int i = 0; i < e[0]; ++i, ++idx) {
          for (int c = 0; c < dim; ++c) {
            const double v = hinv * omega.at(idx, c);
            if (v == 0.0) continue;
            for (int m = 0; m < nlegs; ++m) {
              const Leg& l = legs[m];
              const std::size_t near_i =
                  mesh.set_offset(p - 1, l.t) + mesh.set_index(p - 1, l.t, i, j, k);
              const std::size_t far_i =
                  mesh.set_offset(p - 1, l.t) +
                  mesh.set_index(p - 1, l.t, i + l.da[0], j + l.da[1], k + l.da[2]);
              out.at(far_i, c) += l.sign * v;
              out.at(near_i, c) -= l.sign * v;
            }
          }
        }
  }
  return out;
}

}  // namespace

Cochain project_bc(const Cochain& omega, BcKind bc) {
  Cochain out = omega;
  if (bc == BcKind::None) return out;
  const CubeMesh& mesh = omega.mesh();
  const int p = omega.degree();
  const int dim = omega.dim();
  const bool tan = (bc == BcKind::DirichletTan0);
  for (std::size_t cell = 0; cell < omega.cells(); ++cell) {
    const bool kill = tan ? mesh.tangential_at_boundary(p, cell)
                          : mesh.normal_at_boundary(p, cell);
    if (kill)
      for (int c = 0; c < dim; ++c) out.at(cell, c) = 0.0;
  }
  return out;
}

Cochain codiff(const Cochain& omega, BcKind bc_of_adjoint_domain) {
  return project_bc(d_transpose(omega), bc_of_adjoint_domain);
}

double inner_product(const Cochain& a, const Cochain& b) {
  require_compatible(a, b);
  const double w = a.mesh().h() * a.mesh().h() * a.mesh().h();
  double s = 0.0;
  const double* ad = a.data();
  const double* bd = b.data();
  for (std::size_t i = 0; i < a.value_count(); ++i) s += ad[i] * bd[i];
  return w * s;
}

double l2_norm(const Cochain& a) { return std::sqrt(inner_product(a, a)); }

VertexField collocate(const Cochain& omega) {
  const CubeMesh& mesh = omega.mesh();
  const int p = omega.degree();
  const int n = mesh.n();
  VertexField f;
  f.kind = omega.kind();
  f.degree = p;
  f.nsets = mesh.set_count(p);
  f.nverts = mesh.vertex_count();
  f.dim = omega.dim();
  f.values.assign(static_cast<std::size_t>(f.nsets) * f.nverts * f.dim, 0.0);
  for (int s = 0; s < f.nsets; ++s) {
    const int mask = mesh.set_mask(p, s);
    const std::size_t off = mesh.set_offset(p, s);
    for (int vk = 0; vk <= n; ++vk)
      for (int vj = 0; vj <= n; ++vj)
        for (int vi = 0; vi <= n; ++vi) {
          const std::size_t v = mesh.vertex_index(vi, vj, vk);
          double acc[3] = {0.0, 0.0, 0.0};
          int cnt = 0;
          int dlt = mask;
          while (true) {
            const int ai = vi - ((dlt >> 0) & 1);
            const int aj = vj - ((dlt >> 1) & 1);
            const int ak = vk - ((dlt >> 2) & 1);
            const int hi = n - 1;
            const bool ok = (!(mask & 1) || (ai >= 0 && ai <= hi)) &&
                            (!(mask & 2) || (aj >= 0 && aj <= hi)) &&
                            (!(mask & 4) || (ak >= 0 && ak <= hi));
            if (ok) {
              const std::size_t cell = off + mesh.set_index(p, s, ai, aj, ak);
              for (int c = 0; c < f.dim; ++c) acc[c] += omega.at(cell, c);
              ++cnt;
            }
            if (dlt == 0) break;
            dlt = (dlt - 1) & mask;
          }
          for (int c = 0; c < f.dim; ++c) f.at(s, v, c) = acc[c] / cnt;
        }
  }
  return f;
}

double lp_norm(const Cochain& omega, Lp p) {
  const VertexField f = collocate(omega);
  const CubeMesh& mesh = omega.mesh();
  const double w = mesh.h() * mesh.h() * mesh.h();
  double acc = 0.0;
  double mx = 0.0;
  for (std::size_t v = 0; v < f.nverts; ++v) {
    double f2 = 0.0;
    for (int s = 0; s < f.nsets; ++s)
      for (int c = 0; c < f.dim; ++c) {
        const double x = f.at(s, v, c);
        f2 += x * x;
      }
    switch (p) {
      case Lp::p2: acc += w * f2; break;
      case Lp::p3: acc += w * f2 * std::sqrt(f2); break;
      case Lp::p4: acc += w * f2 * f2; break;
      case Lp::p6: acc += w * f2 * f2 * f2; break;
      case Lp::inf: mx = std::max(mx, f2); break;
    }
  }
  switch (p) {
    case Lp::p2: return std::sqrt(acc);
    case Lp::p3: return std::cbrt(acc);
    case Lp::p4: return std::pow(acc, 0.25);
    case Lp::p6: return std::pow(acc, 1.0 / 6.0);
    default: return std::sqrt(mx);
  }
}

Cochain wedge_bracket(const Cochain& u, const Cochain& v) {
  if (&u.mesh() != &v.mesh() || u.kind() != v.kind())
    throw InvalidOperands("wedge_bracket operand mismatch");
  if (u.degree() != 1 || v.degree() > 2)
    throw InvalidDegree("wedge_bracket supports degree pairs (1,0), (1,1), (1,2)");
  const CubeMesh& mesh = u.mesh();
  const GroupKind kind = u.kind();
  const int q = v.degree();
  const int r = 1 + q;
  Cochain out(mesh, kind, r);
  if (kind == GroupKind::U1) return out;  // abelian: all brackets vanish

  const VertexField U = collocate(u);
  const VertexField V = collocate(v);
  const std::size_t nverts = mesh.vertex_count();
  const int dim = out.dim();
  std::vector<double> tmp(nverts * dim);

  for (int sr = 0; sr < mesh.set_count(r); ++sr) {
    const int rmask = mesh.set_mask(r, sr);
    std::fill(tmp.begin(), tmp.end(), 0.0);
    for (int a = 0; a < 3; ++a) {
      if (!(rmask >> a & 1)) continue;
      const int tmask = rmask & ~(1 << a);
      const int su = set_pos(1, 1 << a);
      const int sv = set_pos(q, tmask);
      const double sgn = shuffle_sign(a, tmask);
      for (std::size_t w = 0; w < nverts; ++w) {
        AlgElem x = alg_zero(kind), y = alg_zero(kind);
        for (int c = 0; c < dim; ++c) {
          x.c[c] = U.at(su, w, c);
          y.c[c] = V.at(sv, w, c);
        }
        const AlgElem b = bracket(x, y);
        for (int c = 0; c < dim; ++c) tmp[w * dim + c] += sgn * b.c[c];
      }
    }
    // Average corner vertices onto each r-cell.
    const auto e = mesh.extents(r, sr);
    const double wgt = 1.0 / (1 << r);
    std::size_t idx = mesh.set_offset(r, sr);
    for (int k = 0; k < e[2]; ++k)
      for (int j = 0; j < e[1]; ++j)
        for (int i = 0; i < e[0]; ++i, ++idx) {
          double acc[3] = {0.0, 0.0, 0.0};
          int dlt = rmask;
          while (true) {
            const std::size_t w = mesh.vertex_index(
                i + ((dlt >> 0) & 1), j + ((dlt >> 1) & 1), k + ((dlt >> 2) & 1));
            for (int c = 0; c < dim; ++c) acc[c] += tmp[w * dim + c];
            if (dlt == 0) break;
            dlt = (dlt - 1) & rmask;
          }
          for (int c = 0; c < dim; ++c) out.at(idx, c) = wgt * acc[c];
        }
  }
  return out;
}

namespace {

// Number of in-range cells of one direction set incident to each vertex
// (the collocation divisor).
std::vector<int> incident_counts(const CubeMesh& mesh, int degree, int set) {
  const int n = mesh.n();
  const int mask = mesh.set_mask(degree, set);
  std::vector<int> m(mesh.vertex_count());
  for (int vk = 0; vk <= n; ++vk)
    for (int vj = 0; vj <= n; ++vj)
      for (int vi = 0; vi <= n; ++vi) {
        int cnt = 1;
        if (mask & 1) cnt *= (vi > 0 && vi < n) ? 2 : 1;
        if (mask & 2) cnt *= (vj > 0 && vj < n) ? 2 : 1;
        if (mask & 4) cnt *= (vk > 0 && vk < n) ? 2 : 1;
        m[mesh.vertex_index(vi, vj, vk)] = cnt;
      }
  return m;
}

}  // namespace

Cochain interior_bracket(const Cochain& a, const Cochain& v) {
  if (&a.mesh() != &v.mesh() || a.kind() != v.kind())
    throw InvalidOperands("interior_bracket operand mismatch");
  if (a.degree() != 1 || v.degree() < 1)
    throw InvalidDegree("interior_bracket maps degree p in [1,3] with a degree-1 first argument");
  const CubeMesh& mesh = a.mesh();
  const GroupKind kind = a.kind();
  const int r = v.degree();
  const int q = r - 1;
  Cochain out(mesh, kind, q);
  if (kind == GroupKind::U1) return out;

  const VertexField A = collocate(a);
  const std::size_t nverts = mesh.vertex_count();
  const int dim = out.dim();

  // Stage 1: transpose of the corner average, r-cells -> vertex fields.
  std::vector<std::vector<double>> vf(mesh.set_count(r));
  for (int sr = 0; sr < mesh.set_count(r); ++sr) {
    vf[sr].assign(nverts * dim, 0.0);
    const int rmask = mesh.set_mask(r, sr);
    const auto e = mesh.extents(r, sr);
    const double wgt = 1.0 / (1 << r);
    std::size_t idx = mesh.set_offset(r, sr);
    for (int k = 0; k < e[2]; ++k)
      for (int j = 0; j < e[1]; ++j)
        for (int i = 0; i < e[0]; ++i, ++idx) {
          int dlt = rmask;
          while (true) {
            const std::size_t w = mesh.vertex_index(
                i + ((dlt >> 0) & 1), j + ((dlt >> 1) & 1), k + ((dlt >> 2) & 1));
            for (int c = 0; c < dim; ++c) vf[sr][w * dim + c] += wgt * v.at(idx, c);
            if (dlt == 0) break;
            dlt = (dlt - 1) & rmask;
          }
        }
  }

  // Stage 2: pointwise adjoint of the bracket combination, then stage 3:
  // transpose of collocation back onto q-cells.
  for (int sq = 0; sq < mesh.set_count(q); ++sq) {
    const int tmask = mesh.set_mask(q, sq);
    std::vector<double> z(nverts * dim, 0.0);
    for (int s = 0; s < 3; ++s) {
      if (tmask >> s & 1) continue;
      const int rmask = tmask | (1 << s);
      const int sr = set_pos(r, rmask);
      const int sa = set_pos(1, 1 << s);
      const double sgn = shuffle_sign(s, tmask);
      for (std::size_t w = 0; w < nverts; ++w) {
        AlgElem g = alg_zero(kind), y = alg_zero(kind);
        for (int c = 0; c < dim; ++c) {
          g.c[c] = A.at(sa, w, c);
          y.c[c] = vf[sr][w * dim + c];
        }
        const AlgElem b = bracket(g, y);
        for (int c = 0; c < dim; ++c) z[w * dim + c] -= sgn * b.c[c];
      }
    }
    const std::vector<int> m = incident_counts(mesh, q, sq);
    const auto e = mesh.extents(q, sq);
    std::size_t idx = mesh.set_offset(q, sq);
    for (int k = 0; k < e[2]; ++k)
      for (int j = 0; j < e[1]; ++j)
        for (int i = 0; i < e[0]; ++i, ++idx) {
          double acc[3] = {0.0, 0.0, 0.0};
          int dlt = tmask;
          while (true) {
            const std::size_t w = mesh.vertex_index(
                i + ((dlt >> 0) & 1), j + ((dlt >> 1) & 1), k + ((dlt >> 2) & 1));
            for (int c = 0; c < dim; ++c) acc[c] += z[w * dim + c] / m[w];
            if (dlt == 0) break;
            dlt = (dlt - 1) & tmask;
          }
          for (int c = 0; c < dim; ++c) out.at(idx, c) = acc[c];
        }
  }
  return out;
}

CovariantGrad covariant_grad(const Cochain& A, const Cochain& omega) {
  if (&A.mesh() != &omega.mesh() || A.kind() != omega.kind())
    throw InvalidOperands("covariant_grad operand mismatch");
  if (A.degree() != 1) throw InvalidDegree("connection must be a 1-cochain");
  const CubeMesh& mesh = A.mesh();
  const int n = mesh.n();
  const double h = mesh.h();
  const VertexField At = collocate(A);
  const VertexField W = collocate(omega);
  CovariantGrad g;
  for (int a = 0; a < 3; ++a) {
    VertexField& out = g.partial[a];
    out = W;
    const int stride[3] = {1, n + 1, (n + 1) * (n + 1)};
    for (int s = 0; s < W.nsets; ++s)
      for (int vk = 0; vk <= n; ++vk)
        for (int vj = 0; vj <= n; ++vj)
          for (int vi = 0; vi <= n; ++vi) {
            const std::size_t v = mesh.vertex_index(vi, vj, vk);
            const int pos = (a == 0) ? vi : (a == 1) ? vj : vk;
            for (int c = 0; c < W.dim; ++c) {
              double der;
              if (pos == 0) {
                der = (-3.0 * W.at(s, v, c) + 4.0 * W.at(s, v + stride[a], c) -
                       W.at(s, v + 2 * stride[a], c)) /
                      (2.0 * h);
              } else if (pos == n) {
                der = (3.0 * W.at(s, v, c) - 4.0 * W.at(s, v - stride[a], c) +
                       W.at(s, v - 2 * stride[a], c)) /
                      (2.0 * h);
              } else {
                der = (W.at(s, v + stride[a], c) - W.at(s, v - stride[a], c)) / (2.0 * h);
              }
              out.at(s, v, c) = der;
            }
            if (A.kind() == GroupKind::SU2) {
              AlgElem av = alg_zero(A.kind()), wv = alg_zero(A.kind());
              for (int c = 0; c < W.dim; ++c) {
                av.c[c] = At.at(a, v, c);
                wv.c[c] = W.at(s, v, c);
              }
              const AlgElem b = bracket(av, wv);
              for (int c = 0; c < W.dim; ++c) out.at(s, v, c) += b.c[c];
            }
          }
  }
  return g;
}

double grad_l2sq(const CovariantGrad& g, const CubeMesh& mesh) {
  const double w = mesh.h() * mesh.h() * mesh.h();
  double s = 0.0;
  for (const VertexField& f : g.partial)
    for (double v : f.values) s += v * v;
  return w * s;
}

double boundary_component_max(const Cochain& omega, bool normal_part) {
  const CubeMesh& mesh = omega.mesh();
  const int p = omega.degree();
  double m = 0.0;
  for (std::size_t cell = 0; cell < omega.cells(); ++cell) {
    const bool sel = normal_part ? mesh.normal_at_boundary(p, cell)
                                 : mesh.tangential_at_boundary(p, cell);
    if (!sel) continue;
    double f2 = 0.0;
    for (int c = 0; c < omega.dim(); ++c) f2 += omega.at(cell, c) * omega.at(cell, c);
    m = std::max(m, f2);
  }
  return std::sqrt(m);
}

}  // namespace ymflow
