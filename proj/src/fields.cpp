#include "ymflow/fields.hpp"

#include <cmath>
#include <random>

#include "ymflow/errors.hpp"

namespace ymflow {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Evaluates f over every cell center of one degree; f(set, comp, x, y, z).
template <typename F>
Cochain sample(const CubeMesh& mesh, GroupKind kind, int degree, F&& f) {
  Cochain out(mesh, kind, degree);
  const double h = mesh.h();
  for (int s = 0; s < mesh.set_count(degree); ++s) {
    const int mask = mesh.set_mask(degree, s);
    const auto e = mesh.extents(degree, s);
    const double ox = (mask & 1) ? 0.5 : 0.0;
    const double oy = (mask & 2) ? 0.5 : 0.0;
    const double oz = (mask & 4) ? 0.5 : 0.0;
    std::size_t idx = mesh.set_offset(degree, s);
    for (int k = 0; k < e[2]; ++k)
      for (int j = 0; j < e[1]; ++j)
        for (int i = 0; i < e[0]; ++i, ++idx) {
          const double x = h * (i + ox), y = h * (j + oy), z = h * (k + oz);
          for (int c = 0; c < out.dim(); ++c) out.at(idx, c) = f(s, c, x, y, z);
        }
  }
  return out;
}

double trig_eval(const TrigFactor& t, double coord, double L) {
  const double a = kPi * t.k * coord / L;
  switch (t.shape) {
    case TrigShape::cosine:
      return std::cos(a);
    case TrigShape::sine:
      return std::sin(a);
    default: {
      const double s = std::sin(a);
      return s * s;
    }
  }
}

// C-infinity bump on (0,1), identically 0 outside, peak value 1 at 1/2.
double bump01(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return std::exp(4.0 - 1.0 / (t * (1.0 - t)));
}

// C2 ramp, 0 below 0 and 1 above 1.
double smooth_ramp(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return s * s * s * (s * (6.0 * s - 15.0) + 10.0);
}

// Per axis: identically 0 within L/8 of the walls, ramps over one quarter,
// identically 1 on the middle quarter. The wide ramp keeps the profile
// representable on the coarsest meshes used by the refinement checks.
double collar_cutoff(double x, double y, double z, double L) {
  const auto prof = [](double u) {
    return smooth_ramp((u - 0.125) * 4.0) * smooth_ramp((0.875 - u) * 4.0);
  };
  return prof(x / L) * prof(y / L) * prof(z / L);
}

struct Mode {
  int set = 0, comp = 0;
  std::array<TrigFactor, 3> f{};
  double amp = 0.0;
};

// Continuum mode list drawn before any mesh access; resolution-independent.
// masks[set] marks the spanned axes of that direction set. A tangential-zero
// constraint acts along transverse axes (cells sampled at lattice planes, so
// a sine factor vanishes there exactly); a normal-zero constraint acts along
// spanned axes (cells sampled at layer centers, so sine_sq leaves only an
// O(h^2) first-layer residue for the projector to remove).
std::vector<Mode> draw_modes(int nsets, int dim, std::uint64_t seed, int kmax,
                             int per_slot, BcKind bc, const std::vector<int>& masks) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_k(1, kmax);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<Mode> modes;
  modes.reserve(static_cast<std::size_t>(nsets) * dim * per_slot);
  for (int s = 0; s < nsets; ++s)
    for (int c = 0; c < dim; ++c)
      for (int m = 0; m < per_slot; ++m) {
        Mode mo;
        mo.set = s;
        mo.comp = c;
        int ksum = 0;
        for (int a = 0; a < 3; ++a) {
          mo.f[a].k = pick_k(rng);
          const bool spanned = (masks[s] >> a) & 1;
          const TrigShape free_shape = coin(rng) == 1 ? TrigShape::sine : TrigShape::cosine;
          if (bc == BcKind::DirichletTan0 && !spanned)
            mo.f[a].shape = TrigShape::sine;
          else if (bc == BcKind::NeumannNorm0 && spanned)
            mo.f[a].shape = TrigShape::sine_sq;
          else
            mo.f[a].shape = free_shape;
          ksum += mo.f[a].k;
        }
        mo.amp = unif(rng) / (1.0 + 0.5 * ksum);
        modes.push_back(mo);
      }
  return modes;
}

}  // namespace

Cochain zero_field(const CubeMesh& mesh, GroupKind kind, int degree) {
  return Cochain(mesh, kind, degree);
}

Cochain trig_mode(const CubeMesh& mesh, GroupKind kind, int degree, int set, int comp,
                  const std::array<TrigFactor, 3>& factors, double amplitude) {
  if (set < 0 || set >= mesh.set_count(degree)) throw InvalidParameter("trig_mode set");
  if (comp < 0 || comp >= algebra_dim(kind)) throw InvalidParameter("trig_mode component");
  const double L = mesh.L();
  return sample(mesh, kind, degree, [&](int s, int c, double x, double y, double z) {
    if (s != set || c != comp) return 0.0;
    return amplitude * trig_eval(factors[0], x, L) * trig_eval(factors[1], y, L) *
           trig_eval(factors[2], z, L);
  });
}

Cochain random_smooth(const CubeMesh& mesh, GroupKind kind, int degree, BcKind bc,
                      std::uint64_t seed, double amplitude, int kmax) {
  if (kmax < 1) throw InvalidParameter("kmax must be at least 1");
  const int nsets = mesh.set_count(degree);
  const int dim = algebra_dim(kind);
  std::vector<int> masks(nsets);
  for (int s = 0; s < nsets; ++s) masks[s] = mesh.set_mask(degree, s);
  const auto modes = draw_modes(nsets, dim, seed, kmax, 3, bc, masks);
  const double L = mesh.L();
  Cochain out = sample(mesh, kind, degree, [&](int s, int c, double x, double y, double z) {
    double v = 0.0;
    for (const Mode& m : modes)
      if (m.set == s && m.comp == c)
        v += m.amp * trig_eval(m.f[0], x, L) * trig_eval(m.f[1], y, L) *
             trig_eval(m.f[2], z, L);
    return amplitude * v;
  });
  return project_bc(out, bc);
}

Cochain interior_bump(const CubeMesh& mesh, GroupKind kind, int degree, std::uint64_t seed,
                      double amplitude) {
  const int nsets = mesh.set_count(degree);
  const int dim = algebra_dim(kind);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> pol(static_cast<std::size_t>(nsets) * dim);
  for (double& p : pol) p = unif(rng);
  std::uniform_int_distribution<int> pick_k(1, 2);
  std::array<int, 3> kk{pick_k(rng), pick_k(rng), pick_k(rng)};
  const double L = mesh.L();
  return sample(mesh, kind, degree, [&](int s, int c, double x, double y, double z) {
    const double cut = collar_cutoff(x, y, z, L);
    if (cut == 0.0) return 0.0;
    const double osc = std::cos(2.0 * kPi * kk[0] * x / L) *
                       std::cos(2.0 * kPi * kk[1] * y / L) *
                       std::cos(2.0 * kPi * kk[2] * z / L);
    return amplitude * pol[static_cast<std::size_t>(s) * dim + c] * cut * osc;
  });
}

Cochain coordinate_bump(const CubeMesh& mesh, GroupKind kind, int degree, int which,
                        double amplitude) {
  const int nsets = mesh.set_count(degree);
  const int dim = algebra_dim(kind);
  const int slot = which % (nsets * dim);
  const int set = slot / dim, comp = slot % dim;
  // Center walks a deterministic low-discrepancy-ish sequence of interior points.
  const double cx = 0.25 + 0.5 * std::fmod(0.618033988749895 * (which + 1), 1.0);
  const double cy = 0.25 + 0.5 * std::fmod(0.754877666246693 * (which + 2), 1.0);
  const double cz = 0.25 + 0.5 * std::fmod(0.569840290998053 * (which + 3), 1.0);
  const double L = mesh.L();
  const double w = 0.18;  // bump half-width as a fraction of L
  return sample(mesh, kind, degree, [&](int s, int c, double x, double y, double z) {
    if (s != set || c != comp) return 0.0;
    const double tx = (x / L - cx) / (2.0 * w) + 0.5;
    const double ty = (y / L - cy) / (2.0 * w) + 0.5;
    const double tz = (z / L - cz) / (2.0 * w) + 0.5;
    return amplitude * bump01(tx) * bump01(ty) * bump01(tz);
  });
}

Cochain white_noise(const CubeMesh& mesh, GroupKind kind, int degree, std::uint64_t seed,
                    double amplitude) {
  Cochain out(mesh, kind, degree);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-amplitude, amplitude);
  for (std::size_t i = 0; i < out.value_count(); ++i) out.data()[i] = unif(rng);
  return out;
}

GaugeField constant_gauge(const CubeMesh& mesh, GroupKind kind, std::uint64_t seed,
                          double amplitude) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-amplitude, amplitude);
  AlgElem x = alg_zero(kind);
  for (int c = 0; c < algebra_dim(kind); ++c) x.c[c] = unif(rng);
  const GroupElem g0 = exp_alg(x);
  GaugeField g(mesh, kind);
  for (auto& ge : g.g) ge = g0;
  return g;
}

GaugeField smooth_gauge(const CubeMesh& mesh, GroupKind kind, std::uint64_t seed,
                        double amplitude, bool collar) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_int_distribution<int> pick_k(1, 2);
  // Two independent directions and phase profiles; their pointwise product
  // leaves the image of any single one-parameter subgroup, so the resulting
  // gauge is genuinely non-abelian for SU2 (a single factor would make every
  // pure gauge exactly flat on the lattice). Draws depend on the seed only,
  // so the continuum field is the same at every resolution.
  const int nfac = kind == GroupKind::U1 ? 1 : 2;
  std::array<AlgElem, 2> dir{alg_zero(kind), alg_zero(kind)};
  std::array<std::array<int, 3>, 2> kk{};
  for (int f = 0; f < nfac; ++f) {
    double nrm = 0.0;
    for (int c = 0; c < algebra_dim(kind); ++c) {
      dir[f].c[c] = unif(rng);
      nrm += dir[f].c[c] * dir[f].c[c];
    }
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) {
      dir[f].c[0] = 1.0;
      nrm = 1.0;
    }
    for (int c = 0; c < algebra_dim(kind); ++c) dir[f].c[c] /= nrm;
    kk[f] = {pick_k(rng), pick_k(rng), pick_k(rng)};
  }
  const double L = mesh.L(), h = mesh.h();
  const int np = mesh.n() + 1;
  GaugeField g(mesh, kind);
  for (int k = 0; k < np; ++k)
    for (int j = 0; j < np; ++j)
      for (int i = 0; i < np; ++i) {
        const double x = i * h, y = j * h, z = k * h;
        const double cut = collar ? collar_cutoff(x, y, z, L) : 1.0;
        GroupElem ge = group_identity(kind);
        for (int f = 0; f < nfac; ++f) {
          double phi = amplitude * cut * std::cos(kPi * kk[f][0] * x / L) *
                       std::cos(kPi * kk[f][1] * y / L) *
                       std::sin(kPi * kk[f][2] * z / L);
          if (f == 1) phi *= 0.7;
          AlgElem v = dir[f];
          for (int c = 0; c < algebra_dim(kind); ++c) v.c[c] *= phi;
          ge = mul(ge, exp_alg(v));
        }
        g.g[mesh.vertex_index(i, j, k)] = ge;
      }
  return g;
}

}  // namespace ymflow
