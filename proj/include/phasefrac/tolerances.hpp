#pragma once

namespace phasefrac {

// All tolerances are absolute and measured in the max norm unless noted.
struct Tolerances {
  double hermiticity = 1e-12;       // per-entry |H - H^dagger|
  double normalization = 1e-10;     // |norm - 1| accepted for input states
  double reconstruction = 1e-10;    // spectral reconstruction, relative to max |H_ij|
  double orthonormality = 1e-12;    // eigenvector columns
  double node = 1e-8;               // |overlap| (and Delta U) below which a phase is undefined
  double turn = 1e-9;               // guards divisions by dS and dS0
  double variance_floor = 1e-12;    // negative variances above -floor are clamped to zero
  double degenerate_mismatch = 1e-9;  // |dPhi - dPhiBar| below which the fraction ratio is skipped
  double sign_noise = 1e-12;        // increments smaller than this carry no sign
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

}  // namespace phasefrac
