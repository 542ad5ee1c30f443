#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "phasefrac/geometry.hpp"

namespace phasefrac {

struct MandelstamTamm {
  double bound = 0.0;  // hbar S0(T) / (2 Delta H)
  double delta_h = 0.0;
  double geodesic_angle = 0.0;
  bool cyclic = false;         // final state back on the initial ray; bound reported as 0
  bool zero_variance = false;  // stationary state; the 0/0 bound is reported as 0
};

/// Requires a single-segment schedule (TimeDependentScheduleUnsupported otherwise).
/// Delta H is read at t = 0 and checked constant along the trajectory within 1e-9.
MandelstamTamm mandelstam_tamm_bound(const Trajectory& traj, const AngleTrack& angles,
                                     const Tolerances& tol = default_tolerances());

/// Trapezoid time average of tan(S0/2). Throws TanDivergence when any sample is a node
/// or lies within the node tolerance of S0 = pi.
double f_bar(const AngleTrack& angles, const Tolerances& tol = default_tolerances());

struct SpeedLimitReport {
  double T = 0.0;
  double mt_bound = 0.0;
  double mt_saturation = 0.0;  // T / mt_bound; +inf when the bound is 0
  double f_bar = 0.0;          // +inf when tan(S0/2) diverges
  double delta_h = 0.0;
  double phi_g_rot = 0.0;      // sum of sin^2(S0_mid/2) dPhi
  double phi_g_lab = 0.0;      // Phi_G(T) from the phase ledger
  double geometric_bound_rot = 0.0;
  double geometric_bound_lab = 0.0;
  double geometric_saturation_rot = 0.0;
  double geometric_saturation_lab = 0.0;
  std::size_t sign_conflict_steps = 0;  // dPhi_D dPhi_G < 0 in the lab frame
  std::size_t frame_excess_steps = 0;   // sin(S0_mid)|dPhi| > lab dS
  std::vector<std::string> notes;

  /// The rotating-frame bound is only derivable when every step keeps
  /// sin(S0)|dPhi| <= dS and dPhi_D, dPhi_G share a sign.
  bool rotating_hypotheses_hold() const {
    return sign_conflict_steps == 0 && frame_excess_steps == 0;
  }
};

SpeedLimitReport geometric_qsl(const Trajectory& traj, const AngleTrack& angles,
                               const PhaseLedger& ledger, const std::vector<double>& lab_step_lengths,
                               const Tolerances& tol = default_tolerances());

}  // namespace phasefrac
