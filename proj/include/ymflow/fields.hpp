#pragma once

#include <array>
#include <cstdint>

#include "ymflow/connection.hpp"

namespace ymflow {

// Deterministic field constructors. Every generator takes an explicit seed
// and identical arguments produce identical values. The random generators
// draw continuum parameters (frequencies, amplitudes, directions) before any
// mesh-dependent sampling, so the same seed describes the same continuum
// field at every resolution; refinement studies rely on this.

Cochain zero_field(const CubeMesh& mesh, GroupKind kind, int degree);

// Separable trigonometric factor along one axis. sine_sq vanishes to second
// order at both endpoints, which keeps first-layer samples O(h^2).
enum class TrigShape { cosine, sine, sine_sq };

struct TrigFactor {
  int k = 1;
  TrigShape shape = TrigShape::sine;
};

// Single separable mode on one (direction set, component) slot, sampled at
// cell centers (offset h/2 along each spanned axis).
Cochain trig_mode(const CubeMesh& mesh, GroupKind kind, int degree, int set, int comp,
                  const std::array<TrigFactor, 3>& factors, double amplitude);

// Band-limited random field: a fixed number of trig modes per (set,
// component) slot with per-axis frequencies <= kmax and decaying random
// amplitudes. Axes the bc subspace constrains get boundary-adapted factors
// (sine for tangential-zero, sine_sq for normal-zero), so the closing
// projection is exact for DirichletTan0 and an O(h^2) truncation for
// NeumannNorm0; the field never carries an O(1) boundary kink that would
// excite unresolved stiff modes in flow studies.
Cochain random_smooth(const CubeMesh& mesh, GroupKind kind, int degree, BcKind bc,
                      std::uint64_t seed, double amplitude, int kmax = 2);

// Smooth compactly supported interior field: random polarizations times a
// C^2 ramp-plateau cutoff per axis, so the field vanishes identically in a
// boundary collar of width L/8 and the profile stays resolved on coarse
// meshes used by refinement ladders.
Cochain interior_bump(const CubeMesh& mesh, GroupKind kind, int degree, std::uint64_t seed,
                      double amplitude);

// Deterministic single-component bump for the Sobolev trial set: component
// slot selected by `which`, centered at a which-dependent interior point.
Cochain coordinate_bump(const CubeMesh& mesh, GroupKind kind, int degree, int which,
                        double amplitude);

// Independent uniform[-amplitude, amplitude] entries.
Cochain white_noise(const CubeMesh& mesh, GroupKind kind, int degree, std::uint64_t seed,
                    double amplitude);

// Spatially constant gauge g(x) = exp(random algebra element of norm ~ amplitude).
GaugeField constant_gauge(const CubeMesh& mesh, GroupKind kind, std::uint64_t seed,
                          double amplitude = 1.0);

// Product of one (abelian) or two (non-abelian) factors exp(phi_f(x) X_f)
// with band-limited scalar profiles phi_f and fixed random algebra
// directions X_f; two independent factors keep the gauge off every single
// one-parameter subgroup, so its pure-gauge connection is not exactly flat
// on the lattice. With collar = true the profiles carry a cutoff vanishing
// within L/8 of the walls, so g is exactly the identity in a boundary
// collar.
GaugeField smooth_gauge(const CubeMesh& mesh, GroupKind kind, std::uint64_t seed,
                        double amplitude, bool collar);

}  // namespace ymflow
