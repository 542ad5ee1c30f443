#pragma once

#include <string>
#include <vector>

#include "phasefrac/geometry.hpp"

namespace phasefrac {

struct OracleReport {
  std::string quantity;
  double main_value = 0.0;    // main-pipeline value at the sample of largest disagreement
  double oracle_value = 0.0;
  double abs_diff = 0.0;      // |main_value - oracle_value|
  double rel_diff = 0.0;      // abs_diff / max(1, max |oracle series|)
  std::string method;
};

/// i * integral <chi|d chi/dt> dt with chi from central finite differences and the
/// trapezoid rule, Richardson-extrapolated from the full grid and every other sample.
/// Needs >= 16 samples, an even step count and no nodes (NodeEncountered otherwise).
double fd_connection_integral(const Trajectory& traj, const Tolerances& tol = default_tolerances());

/// Every ledger and geometry series recomputed by a finite-difference / direct-definition
/// discretization that shares no code path with the main pipeline.
struct BruteForceLedger {
  std::vector<double> s0;               // Gram-determinant form of 2 arccos |c|
  std::vector<double> phi_total;        // unwrapped absolute arguments of c
  std::vector<double> phi_dynamical;    // Simpson quadrature of recomputed <H>
  std::vector<double> phi_geometric;    // finite-difference connection of chi
  std::vector<double> phi_orthogonal;   // finite-difference connection of the orthogonal part
  std::vector<double> gpf;              // 1 - |c|^2
  std::vector<double> step_lengths;     // Gram-determinant angle between consecutive states
  std::vector<double> circuit_cumulative;
  std::vector<double> gamma;
  std::vector<double> kernel;
};

BruteForceLedger recompute_ledger_bruteforce(const Trajectory& traj,
                                             const Tolerances& tol = default_tolerances());

/// gamma and K are compared only where gamma >= this; below it both sides are roundoff.
inline constexpr double kConditionedGamma = 1e-3;

/// One report per series; NaN entries on either side are skipped.
std::vector<OracleReport> compare_with_bruteforce(const PhaseLedger& ledger,
                                                  const GeometryReport& geometry,
                                                  const BruteForceLedger& brute);

}  // namespace phasefrac
