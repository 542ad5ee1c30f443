#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "phasefrac/evolution.hpp"

namespace phasefrac {

/// U|psi> = mean |psi> + delta |orthogonal>, with <psi|orthogonal> = 0.
struct UnitaryDecomposition {
  Complex mean;                            // <psi|U|psi>
  double delta = 0.0;                      // Delta U = sqrt(1 - |mean|^2)
  std::optional<QuantumState> orthogonal;  // absent when delta <= node tolerance
};

/// Splits u_psi into its component along psi and the normalized remainder.
/// delta is the norm of the remainder, which equals sqrt(1 - |mean|^2) for
/// normalized inputs and stays accurate when the remainder is tiny.
UnitaryDecomposition decompose_unitary_action(const QuantumState& psi, const QuantumState& u_psi,
                                              const Tolerances& tol = default_tolerances());

/// Time-dependent Bargmann angle and unwrapped Pancharatnam phase.
struct AngleTrack {
  std::vector<double> times;
  std::vector<double> s0;         // in [0, pi]
  std::vector<double> phi_total;  // unwrapped, phi(0) = 0; NaN at nodes
  std::vector<bool> node_flags;   // |c_k| <= node tolerance

  std::size_t node_count() const;
};

enum class NodePolicy {
  Continue,  // flag nodes, resume unwrapping on the branch nearest a quadratic extrapolation
  Strict,    // throw NodeEncountered at the first node
};

/// Throws PhaseResolutionExceeded when a step between non-node samples turns
/// the overlap by pi/2 or more; refine the trajectory and retry.
AngleTrack angle_track(const Trajectory& traj, NodePolicy policy = NodePolicy::Continue,
                       const Tolerances& tol = default_tolerances());

struct OrthogonalTrack {
  std::vector<std::optional<QuantumState>> states;
  std::size_t defined_from = 0;  // first present index; states.size() if none

  std::size_t present_count() const;
};

OrthogonalTrack orthogonal_track(const Trajectory& traj,
                                 const Tolerances& tol = default_tolerances());

/// Picks raw + 2 pi m closest to `target`. Exact ties (within 1e-9 rad) take the
/// lower branch, so a symmetric node crossing always turns the phase by -pi.
double nearest_branch(double raw, double target);

/// Quadratic (or lower-order, with fewer points) Lagrange extrapolation to t.
double extrapolate(const std::vector<double>& ts, const std::vector<double>& ys, double t);

/// Max-norm residual of cos(S0/2) e^{i phi} psi0 + sin(S0/2) orth - psi(t_k) at one sample.
double theorem_reconstruction_residual(const Trajectory& traj, const AngleTrack& angles,
                                       const OrthogonalTrack& orth, std::size_t k);

}  // namespace phasefrac
