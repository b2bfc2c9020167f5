#pragma once

#include <array>
#include <cstdint>

#include "ymflow/errors.hpp"

namespace ymflow {

// Compact structure groups and their Lie algebras in an orthonormal basis.
//
// U1:  algebra = R with basis e1 = i, group = unit complex numbers.
// SU2: algebra basis e_a = -(i/2) sigma_a, so [e_a, e_b] = eps_abc e_c and
//      bracket coefficients are the cross product. Group elements are unit
//      quaternions (w, x, y, z) under w*I + x*(-i s1) + y*(-i s2) + z*(-i s3);
//      exp of a coefficient vector v is (cos(|v|/2), sin(|v|/2) v/|v|) and the
//      adjoint action is the quaternion rotation of the coefficient vector.

enum class GroupKind : std::uint8_t { U1 = 0, SU2 = 1 };

inline int algebra_dim(GroupKind k) { return k == GroupKind::U1 ? 1 : 3; }
inline int fundamental_dim(GroupKind k) { return k == GroupKind::U1 ? 1 : 2; }
inline const char* group_name(GroupKind k) { return k == GroupKind::U1 ? "u1" : "su2"; }

struct AlgElem {
  GroupKind kind = GroupKind::U1;
  std::array<double, 3> c{0.0, 0.0, 0.0};  // only the first algebra_dim entries used
};

inline AlgElem alg_zero(GroupKind k) { return AlgElem{k, {0.0, 0.0, 0.0}}; }

AlgElem bracket(const AlgElem& x, const AlgElem& y);
double inner(const AlgElem& x, const AlgElem& y);
double alg_norm(const AlgElem& x);

// Largest operator norm of ad_x over unit x; exact closed form per group.
double ad_norm(GroupKind k);

struct GroupElem {
  GroupKind kind = GroupKind::U1;
  // U1: q[0] + i q[1]. SU2: quaternion (q[0], q[1], q[2], q[3]).
  std::array<double, 4> q{1.0, 0.0, 0.0, 0.0};
};

GroupElem group_identity(GroupKind k);
GroupElem mul(const GroupElem& a, const GroupElem& b);
GroupElem inverse(const GroupElem& g);

// Adjoint action Ad_g on algebra coefficients.
AlgElem ad_action(const GroupElem& g, const AlgElem& x);

GroupElem exp_alg(const AlgElem& x);

// Principal logarithm; throws LogBranchError at or near the cut locus
// (U1 phase magnitude >= pi - 1e-6, SU2 rotation angle >= pi - 1e-6).
AlgElem log_group(const GroupElem& g);

// Real part of the trace in the defining representation (2 Re for SU2 is the
// full trace; U1 returns the real part of the phase factor).
double trace_re(const GroupElem& g);

// Distance from exact unitarity; renormalize restores it. mul() renormalizes
// automatically once drift exceeds 1e-13.
double unitarity_drift(const GroupElem& g);
GroupElem renormalize(const GroupElem& g);

}  // namespace ymflow
