#pragma once

#include <cstddef>
#include <vector>

#include "phasefrac/decomposition.hpp"

namespace phasefrac {

/// Phi_D(t_k) = -(1/hbar) * integral of <H> over [0, t_k] (trapezoid, split at segment boundaries).
std::vector<double> dynamical_phase(const Trajectory& traj);

/// Discrete Pancharatnam connection of the reference state chi_k = (conj(c_k)/|c_k|) psi_k:
/// Phi_G(t_k) = -sum_{j<k} arg <chi_j|chi_{j+1}>. Node samples are NaN; the sum bridges a
/// node on the branch nearest the extrapolated trend.
std::vector<double> geometric_phase(const Trajectory& traj, const AngleTrack& angles);

/// Phase of the orthogonal component: sum of arg <orth_j|orth_{j+1}> over consecutive present
/// samples, anchored to zero at defined_from. Absent samples are NaN and contribute nothing.
/// Throws InsufficientSamples with fewer than two present samples.
std::vector<double> orthogonal_phase(const OrthogonalTrack& orth);

/// Per-step residuals of the fractional-contribution law. Index k refers to the step
/// t_k -> t_{k+1}; steps touching a node are NaN and counted in excluded_steps.
struct FractionalLawResiduals {
  std::vector<double> residual_d;
  std::vector<double> residual_g;
  double max_abs_d = 0.0;
  double max_abs_g = 0.0;
  std::size_t evaluated_steps = 0;
  std::size_t excluded_steps = 0;
  // Sum over evaluated steps of the predicted and the measured increments.
  double predicted_sum_d = 0.0;
  double predicted_sum_g = 0.0;
  double measured_sum_d = 0.0;
  double measured_sum_g = 0.0;
};

/// Mid-step weight sin^2(S0_mid / 2) with S0_mid the mean of the endpoint angles.
double midpoint_weight(double s0_a, double s0_b);

/// residual_d = dPhi_D - [(1 - w) dPhi + w dPhiBar], residual_g = dPhi_G - w (dPhi - dPhiBar).
/// Where the orthogonal component is absent at an endpoint (Delta U at roundoff level, so w is
/// O(dt^2)) dPhiBar is taken as zero. Throws RangeMismatch for unequal series lengths.
FractionalLawResiduals verify_fractional_law(const std::vector<double>& s0,
                                             const std::vector<double>& phi_total,
                                             const std::vector<double>& phi_dynamical,
                                             const std::vector<double>& phi_geometric,
                                             const std::vector<double>& phi_orthogonal);

/// f_g(t_k) = sin^2(S0(t_k)/2), in [0, 1].
std::vector<double> geometric_phase_fraction(const AngleTrack& angles);

/// Empirical ratio dPhi_G / (dPhi - dPhiBar) per step against the mid-step weight.
struct GpfRatioCheck {
  std::vector<double> ratio;      // NaN where skipped
  double max_deviation = 0.0;
  std::size_t checked = 0;
  std::size_t skipped_degenerate = 0;  // |dPhi - dPhiBar| <= threshold
  std::size_t skipped_invalid = 0;     // node steps
  // Descriptive only: steps where S0 and f_g move in the same direction.
  std::size_t monotone_steps = 0;
};

GpfRatioCheck check_gpf_ratio(const std::vector<double>& s0, const std::vector<double>& phi_total,
                              const std::vector<double>& phi_geometric,
                              const std::vector<double>& phi_orthogonal,
                              const Tolerances& tol = default_tolerances());

struct PhaseLedger {
  std::vector<double> times;
  std::vector<double> s0;
  std::vector<double> phi_total;
  std::vector<double> phi_dynamical;
  std::vector<double> phi_geometric;
  std::vector<double> phi_geometric_difference;  // Phi - Phi_D, the additivity cross-check
  std::vector<double> phi_orthogonal;
  std::vector<double> gpf;
  FractionalLawResiduals fractional_law;
  GpfRatioCheck gpf_check;
  double additivity_max = 0.0;  // max |Phi - Phi_D - Phi_G| over non-node samples
};

PhaseLedger build_phase_ledger(const Trajectory& traj, const AngleTrack& angles,
                               const OrthogonalTrack& orth,
                               const Tolerances& tol = default_tolerances());

}  // namespace phasefrac
