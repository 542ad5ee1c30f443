#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "phasefrac/phases.hpp"

namespace phasefrac {

/// Fubini-Study distance 2 arccos|<a|b>|, evaluated as 2 atan2(|b - <a|b> a|, |<a|b>|)
/// so that short steps keep full relative precision.
double fs_distance(const Vector& a, const Vector& b);

struct StepLengths {
  std::vector<double> overlap_form;   // 2 arccos |<psi_k|psi_{k+1}>|
  std::vector<double> variance_form;  // 2 Delta H(t_k) dt / hbar
};

StepLengths fs_step_lengths(const Trajectory& traj);

struct PathLength {
  double overlap_form = 0.0;
  double variance_form = 0.0;  // 2/hbar * trapezoid of Delta H
  double relative_difference = 0.0;
};

PathLength total_length(const Trajectory& traj);

/// (cos(S0/2) e^{i Phi}, sin(S0/2)) per sample: the state with its orthogonal
/// component frozen at a fixed direction.
struct EffectiveRotatingState {
  std::vector<std::array<Complex, 2>> components;
};

EffectiveRotatingState rotating_frame_state(const AngleTrack& angles);

/// Per-step metric residuals; NaN on steps touching a node.
struct MetricResiduals {
  std::vector<double> rotating;          // dS_eff^2 - [dS0^2 + sin^2(S0_mid) dPhi^2]
  std::vector<double> rotating_product;  // dS_eff^2 - [dS0^2 + 4 dPhi_D^rot dPhi_G^rot]
  std::vector<double> lab;               // diagnostic: lab dS^2 - [dS0^2 + sin^2(S0_mid) dPhi^2]
  double max_rotating = 0.0;
  double max_rotating_product = 0.0;
  double max_form_disagreement = 0.0;  // max |rotating - rotating_product|
  double max_lab = 0.0;
};

MetricResiduals verify_metric_identities(const AngleTrack& angles,
                                         const EffectiveRotatingState& effective,
                                         const std::vector<double>& lab_step_lengths);

struct Circuitousness {
  std::vector<double> per_step;    // dS_k - |dS0_k|
  std::vector<double> cumulative;  // length samples(), starts at 0
};

Circuitousness circuitousness(const std::vector<double>& lab_step_lengths,
                              const AngleTrack& angles);

/// Contraction factor and kernel per step. NaN marks UNDEFINED.
struct KernelGamma {
  std::vector<double> gamma;
  std::vector<double> kernel;
  std::size_t clamped_steps = 0;     // negative radicand clamped to zero
  double max_unclamped_gamma_sq = 0.0;  // largest 1 - (dS0/dS)^2 before clamping
  double kernel_length = 0.0;        // sum |K_k| |dS0_k| over steps with K defined
  double direct_length = 0.0;        // sum dS_k over the same steps
  double relative_discrepancy = 0.0;
};

KernelGamma kernel_and_gamma(const std::vector<double>& lab_step_lengths,
                             const AngleTrack& angles,
                             const Tolerances& tol = default_tolerances());

struct GeometryReport {
  std::vector<double> times;
  StepLengths step_lengths;
  std::vector<double> ds0;  // signed S0 increments per step
  std::vector<double> cumulative_length;
  double total_length = 0.0;
  double total_length_variance_form = 0.0;
  double geodesic_angle = 0.0;  // S0(T)
  Circuitousness circuit;
  KernelGamma kernel;
  MetricResiduals metric;
};

GeometryReport build_geometry_report(const Trajectory& traj, const AngleTrack& angles,
                                     const Tolerances& tol = default_tolerances());

}  // namespace phasefrac
