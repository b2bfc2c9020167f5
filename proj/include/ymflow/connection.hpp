#pragma once

#include <vector>

#include "ymflow/forms.hpp"

namespace ymflow {

// One group element per vertex.
struct GaugeField {
  const CubeMesh* mesh = nullptr;
  GroupKind kind = GroupKind::U1;
  std::vector<GroupElem> g;

  GaugeField() = default;
  GaugeField(const CubeMesh& m, GroupKind k)
      : mesh(&m), kind(k), g(m.vertex_count(), group_identity(k)) {}
};

GaugeField identity_gauge(const CubeMesh& mesh, GroupKind kind);
GaugeField inverse(const GaugeField& g);

// Curvature 2-cochain B = dA + (1/2)[A ^ A].
Cochain curvature(const Cochain& A);

enum class CovVariant : std::uint8_t {
  minimal,  // domain restricted by the Dirichlet (tangential-zero) projector
  maximal,  // unrestricted domain
};

// Covariant derivative d_A omega = d omega + [A ^ omega]. The minimal variant
// requires omega to lie in the tangential-zero subspace (throws
// DomainViolation otherwise) and composes with that projector, so its matrix
// adjoint is the maximal covariant codifferential below.
Cochain cov_d(const Cochain& A, const Cochain& omega, CovVariant variant);

enum class CovCodiffVariant : std::uint8_t {
  maximal_adjoint_of_minimal,  // adjoint of cov_d(., minimal)
  minimal_adjoint_of_maximal,  // adjoint of cov_d(., maximal)
};

// Exact matrix adjoint of the corresponding cov_d variant with respect to
// inner_product.
Cochain cov_codiff(const Cochain& A, const Cochain& omega, CovCodiffVariant variant);

// Discrete gauge action on edge values:
//   A^g(e: x->y) = (1/2)(Ad_{g(x)^-1} + Ad_{g(y)^-1}) A(e) + (1/h) log(g(x)^-1 g(y)).
// Exact for constant g; first-order accurate for smooth varying g.
Cochain gauge_transform(const Cochain& A, const GaugeField& g);

// Connection of a pure gauge: A(e: x->y) = (1/h) log(g(x)^-1 g(y)).
Cochain pure_gauge(const GaugeField& g);

// Homogeneous part of the gauge action (no log term), for transforming
// derivative fields such as A': (1/2)(Ad_{g(x)^-1} + Ad_{g(y)^-1}) omega(e).
Cochain gauge_rotate(const Cochain& omega, const GaugeField& g);

struct NormalGaugeResult {
  GaugeField g;
  Cochain A;                     // transformed connection
  double conflict_residual = 0;  // max |A^g| over edge-collar conflict edges
};

// Collar gauge that removes the first-layer normal components of A: g is the
// identity on boundary vertices and at depth >= 2; each depth-1 vertex gauge
// zeroes one inward perpendicular edge exactly. Vertices reachable from more
// than one face (edge and corner collars) are resolved through the gauge of
// their wall anchor, solved by fixed-point iteration; conflict_residual
// reports the worst first-layer value left after the transform.
NormalGaugeResult normal_gauge(const Cochain& A);

}  // namespace ymflow
