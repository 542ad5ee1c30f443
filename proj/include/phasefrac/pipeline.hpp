#pragma once

#include <optional>
#include <string>
#include <vector>

#include "phasefrac/oracle.hpp"
#include "phasefrac/scenarios.hpp"
#include "phasefrac/speedlimits.hpp"

namespace phasefrac {

/// Everything computed for one scenario at one resolution.
struct Analysis {
  std::string scenario;
  Trajectory trajectory;
  AngleTrack angles;
  OrthogonalTrack orthogonal;
  PhaseLedger ledger;
  GeometryReport geometry;
  std::optional<SpeedLimitReport> speed_limits;  // absent for multi-segment schedules
};

/// steps <= 0 selects the scenario's default.
Analysis analyze(const Scenario& scenario, int steps = 0, NodePolicy policy = NodePolicy::Continue,
                 const Tolerances& tol = default_tolerances());

struct CheckResult {
  std::string name;
  double value = 0.0;  // max residual or violation; NaN when not applicable
  double limit = 0.0;
  bool applicable = true;
  bool pass = true;
  std::string detail;
};

struct VerifyOptions {
  int steps = 0;
  double tol = 1e-5;
  bool deep = false;
  bool strict_nodes = false;
};

struct VerifyReport {
  std::string scenario;
  int steps = 0;
  std::vector<CheckResult> checks;

  bool passed() const;
  /// Names of failing checks, comma separated.
  std::string failures() const;
};

/// Runs the invariant battery on one scenario. Residual checks compare against
/// options.tol; inequality checks (speed limits) allow a 1e-9 slack regardless.
/// Errors from the pipeline (including NodeEncountered under strict_nodes) propagate.
VerifyReport verify_scenario(const Scenario& scenario, const VerifyOptions& options,
                             const Tolerances& tol = default_tolerances());

}  // namespace phasefrac
