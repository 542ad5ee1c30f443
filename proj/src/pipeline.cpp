#include "phasefrac/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "phasefrac/error.hpp"

namespace phasefrac {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInequalitySlack = 1e-9;

CheckResult residual_check(std::string name, double value, double limit, std::string detail = {}) {
  CheckResult c;
  c.name = std::move(name);
  c.value = value;
  c.limit = limit;
  c.pass = std::isfinite(value) && value <= limit;
  c.detail = std::move(detail);
  return c;
}

CheckResult not_applicable(std::string name, std::string why) {
  CheckResult c;
  c.name = std::move(name);
  c.value = kNaN;
  c.applicable = false;
  c.pass = true;
  c.detail = std::move(why);
  return c;
}

}  // namespace

Analysis analyze(const Scenario& scenario, int steps, NodePolicy policy, const Tolerances& tol) {
  const int n = steps > 0 ? steps : scenario.default_steps;
  Trajectory traj = evolve(scenario.psi0, scenario.schedule, n, tol);
  AngleTrack angles = angle_track(traj, policy, tol);
  OrthogonalTrack orth = orthogonal_track(traj, tol);
  PhaseLedger ledger = build_phase_ledger(traj, angles, orth, tol);
  GeometryReport geometry = build_geometry_report(traj, angles, tol);
  std::optional<SpeedLimitReport> qsl;
  if (traj.schedule().time_independent()) {
    qsl = geometric_qsl(traj, angles, ledger, geometry.step_lengths.overlap_form, tol);
  }
  return Analysis{scenario.name,    std::move(traj),     std::move(angles), std::move(orth),
                  std::move(ledger), std::move(geometry), std::move(qsl)};
}

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::string VerifyReport::failures() const {
  std::string out;
  for (const auto& c : checks) {
    if (c.pass) continue;
    if (!out.empty()) out += ", ";
    out += c.name;
  }
  return out;
}

VerifyReport verify_scenario(const Scenario& scenario, const VerifyOptions& options,
                             const Tolerances& tol) {
  const NodePolicy policy = options.strict_nodes ? NodePolicy::Strict : NodePolicy::Continue;
  const Analysis a = analyze(scenario, options.steps, policy, tol);
  const Trajectory& traj = a.trajectory;
  const double eps = options.tol;

  VerifyReport report;
  report.scenario = scenario.name;
  report.steps = static_cast<int>(traj.steps());

  double recon = 0.0;
  for (std::size_t k = 0; k < traj.samples(); ++k) {
    recon = std::max(recon, theorem_reconstruction_residual(traj, a.angles, a.orthogonal, k));
  }
  report.checks.push_back(residual_check("reconstruction", recon, eps));
  report.checks.push_back(residual_check("additivity", a.ledger.additivity_max, eps));

  const auto& law = a.ledger.fractional_law;
  const std::string excluded = std::to_string(law.excluded_steps) + " node steps excluded";
  report.checks.push_back(residual_check("fractional_law_dynamical", law.max_abs_d, eps, excluded));
  report.checks.push_back(residual_check("fractional_law_geometric", law.max_abs_g, eps, excluded));

  const auto& gpf = a.ledger.gpf_check;
  report.checks.push_back(residual_check(
      "gpf_ratio", gpf.max_deviation, eps,
      std::to_string(gpf.checked) + " checked, " + std::to_string(gpf.skipped_degenerate) +
          " degenerate, " + std::to_string(gpf.skipped_invalid) + " node"));

  if (traj.schedule().time_independent()) {
    const double rel = std::abs(a.geometry.total_length - a.geometry.total_length_variance_form) /
                       std::max(1.0, a.geometry.total_length);
    report.checks.push_back(residual_check("length_cross_form", rel, eps));
  } else {
    report.checks.push_back(
        not_applicable("length_cross_form", "variance form is discontinuous at segment boundaries"));
  }

  report.checks.push_back(residual_check("metric_rotating", a.geometry.metric.max_rotating, eps));
  report.checks.push_back(residual_check("metric_form_agreement",
                                         a.geometry.metric.max_form_disagreement, eps));

  if (a.speed_limits) {
    const SpeedLimitReport& q = *a.speed_limits;
    CheckResult mt = residual_check("mandelstam_tamm", std::max(0.0, q.mt_bound - q.T),
                                    kInequalitySlack);
    for (const auto& note : q.notes) mt.detail += (mt.detail.empty() ? "" : ",") + note;
    report.checks.push_back(mt);
    if (q.rotating_hypotheses_hold()) {
      report.checks.push_back(residual_check(
          "geometric_qsl_rotating", std::max(0.0, q.geometric_bound_rot - q.T), kInequalitySlack));
    } else {
      report.checks.push_back(not_applicable(
          "geometric_qsl_rotating", "outside derivation hypotheses: " +
                                        std::to_string(q.sign_conflict_steps) + " sign conflicts, " +
                                        std::to_string(q.frame_excess_steps) + " frame excess"));
    }
  } else {
    report.checks.push_back(not_applicable("mandelstam_tamm", "time-dependent schedule"));
    report.checks.push_back(not_applicable("geometric_qsl_rotating", "time-dependent schedule"));
  }

  if (options.deep) {
    const BruteForceLedger brute = recompute_ledger_bruteforce(traj, tol);
    for (const auto& r : compare_with_bruteforce(a.ledger, a.geometry, brute)) {
      report.checks.push_back(residual_check("oracle_" + r.quantity, r.rel_diff, 1e-4, r.method));
    }
    if (a.angles.node_count() == 0 && traj.steps() % 2 == 0) {
      const double fd = fd_connection_integral(traj, tol);
      report.checks.push_back(residual_check(
          "oracle_connection_integral", std::abs(fd - a.ledger.phi_geometric.back()), 1e-4));
    } else {
      report.checks.push_back(not_applicable("oracle_connection_integral", "node on the path"));
    }
  }
  return report;
}

}  // namespace phasefrac
