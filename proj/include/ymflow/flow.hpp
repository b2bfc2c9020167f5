#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ymflow/connection.hpp"

namespace ymflow {

enum class FlowBc : std::uint8_t { Dirichlet = 0, Neumann = 1, Marini = 2 };
enum class FlowKind : std::uint8_t { Direct = 0, Parabolic = 1 };
enum class Scheme : std::uint8_t { Euler = 0, RK4 = 1 };
enum class StoreFields : std::uint8_t { None = 0, B = 1, AB = 2 };

inline const char* flow_bc_name(FlowBc b) {
  switch (b) {
    case FlowBc::Dirichlet: return "dirichlet";
    case FlowBc::Neumann: return "neumann";
    default: return "marini";
  }
}

struct FlowConfig {
  GroupKind group = GroupKind::SU2;
  int n = 8;
  double L = 1.0;
  double dt = 0.0;  // 0 selects theta * h^2
  double T = 0.1;
  FlowBc bc = FlowBc::Dirichlet;
  FlowKind flow = FlowKind::Direct;
  Scheme scheme = Scheme::RK4;
  double epsilon = 0.0;
  int record_stride = 1;
  std::uint64_t seed = 1;
  double theta = 1.0 / 12.0;  // CFL fraction used when dt == 0
  StoreFields store = StoreFields::None;

  double h() const { return L / n; }
  double effective_dt() const { return dt > 0.0 ? dt : theta * h() * h(); }

  // Throws InvalidParameter on malformed values or a CFL factor above 1/3;
  // returns true when the factor exceeds the warning level 1/6.
  bool validate() const;
};

// Evolution right-hand sides. Inputs must satisfy the boundary-condition
// invariant of the flow (Dirichlet: tangential part zero, Neumann: normal
// part zero, Marini: unconstrained); DomainViolation otherwise.
//
// Direct flow: A' = -d_A^* B with the adjoint variant matched to the
// boundary condition, projected back onto the constraint subspace
// (Marini: the minimal adjoint with no projection).
Cochain ym_rhs(const Cochain& A, FlowBc bc);

// Strictly parabolic flow: C' = -(d_C^* B_C + d_C d^* C); Dirichlet zeroes
// the boundary-vertex trace of d^* C before the outer derivative.
Cochain parabolic_rhs(const Cochain& C, FlowBc bc);

// Lower-order term X(C) of the decomposition of the parabolic right-hand
// side against the Hodge Laplacian, assembled from the same bracket
// primitives: X(C) = [C .| B] - (1/2) d^*[C ^ C] - [C, d^* C].
Cochain x_nonlinear(const Cochain& C);

// One explicit step with the boundary projector applied after every stage.
Cochain step(const Cochain& y, const std::function<Cochain(const Cochain&)>& rhs,
             Scheme scheme, double dt, BcKind projector);

// Left-multiplicative gauge ODE update g(x) <- exp(dt V(x)) g(x); V is the
// 0-cochain d^* C evaluated at the step midpoint (caller contract).
void gauge_ode_step(GaugeField& g, const Cochain& V, double dt);

struct FlowRecord {
  double t = 0.0;
  double B_l2 = 0.0, B_l3 = 0.0, B_l6 = 0.0, B_linf = 0.0;
  double Aprime_l2 = 0.0;
  double A_l2 = 0.0, A_l4 = 0.0, dstarA_l2 = 0.0;
  double bc_residual_linf = 0.0;
  double t34_B_linf = 0.0;
  double aa_b = 0.0;  // ([A' ^ A'], B) pairing, used by the derivative checks
};

struct Trajectory {
  std::vector<FlowRecord> records;
  std::vector<Cochain> B_fields;  // aligned with records when stored
  std::vector<Cochain> A_fields;
  bool blew_up = false;
  bool cfl_warning = false;
  std::optional<Cochain> final_A;

  double initial_B_l2() const { return records.empty() ? 0.0 : records.front().B_l2; }
};

FlowRecord make_record(double t, const Cochain& A, const Cochain& Aprime, FlowBc bc);

// Integrates the configured flow from A0, recording every record_stride-th
// step (plus the initial and final states). Marini runs the normal-gauge
// pipeline: collar gauge, normal-zero projection, Neumann evolution; records
// stay in the evolved frame (their norms are gauge-invariant pointwise) and
// only final_A is transformed back.
Trajectory integrate(const CubeMesh& mesh, const FlowConfig& cfg, const Cochain& A0);

struct DsResult {
  Trajectory traj_C;   // parabolic trajectory
  Trajectory traj_Ae;  // reconstructed trajectory, records from t >= epsilon
  GaugeField g_final;
};

// Parabolic flow plus the gauge ODE started at t = epsilon; reconstructed
// records are A_eps(t) = gauge_transform(C(t), g_eps(t)). The parabolic state
// advances on half steps so the gauge ODE sees exact midpoint values.
DsResult donaldson_sadun(const CubeMesh& mesh, const FlowConfig& cfg, const Cochain& A0);

}  // namespace ymflow
