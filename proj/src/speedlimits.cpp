#include "phasefrac/speedlimits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "phasefrac/error.hpp"

namespace phasefrac {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double saturation(double T, double bound) { return bound > 0.0 ? T / bound : kInf; }

}  // namespace

MandelstamTamm mandelstam_tamm_bound(const Trajectory& traj, const AngleTrack& angles,
                                     const Tolerances& tol) {
  if (!traj.schedule().time_independent()) {
    throw Error(ErrorCode::TimeDependentScheduleUnsupported,
                "speed limits need a single time-independent Hamiltonian");
  }
  const auto& var = traj.energy_variances();
  const double delta_h = std::sqrt(var.front());
  for (double v : var) {
    if (std::abs(std::sqrt(v) - delta_h) > 1e-9) {
      throw Error(ErrorCode::NumericalFailure, "energy uncertainty drifts along the trajectory");
    }
  }
  MandelstamTamm out;
  out.delta_h = delta_h;
  out.geodesic_angle = angles.s0.back();
  const double final_delta_u = std::sin(0.5 * out.geodesic_angle);
  out.cyclic = final_delta_u <= tol.node;
  if (delta_h <= tol.turn) {
    out.zero_variance = true;
    return out;
  }
  out.bound = out.cyclic ? 0.0 : traj.hbar() * out.geodesic_angle / (2.0 * delta_h);
  return out;
}

double f_bar(const AngleTrack& angles, const Tolerances& tol) {
  const std::size_t n = angles.s0.size();
  if (n < 2) throw Error(ErrorCode::InsufficientSamples, "f_bar needs at least two samples");
  std::vector<double> tan_half(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (angles.node_flags[k] || std::numbers::pi - angles.s0[k] <= tol.node) {
      throw Error(ErrorCode::TanDivergence,
                  "tan(S0/2) diverges at sample " + std::to_string(k));
    }
    tan_half[k] = std::tan(0.5 * angles.s0[k]);
  }
  double integral = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    integral += 0.5 * (angles.times[k + 1] - angles.times[k]) * (tan_half[k] + tan_half[k + 1]);
  }
  return integral / (angles.times.back() - angles.times.front());
}

SpeedLimitReport geometric_qsl(const Trajectory& traj, const AngleTrack& angles,
                               const PhaseLedger& ledger, const std::vector<double>& lab_step_lengths,
                               const Tolerances& tol) {
  const MandelstamTamm mt = mandelstam_tamm_bound(traj, angles, tol);
  SpeedLimitReport r;
  r.T = traj.duration();
  r.delta_h = mt.delta_h;
  r.mt_bound = mt.bound;
  r.mt_saturation = saturation(r.T, r.mt_bound);
  if (mt.cyclic) r.notes.emplace_back("cyclic");
  if (mt.zero_variance) r.notes.emplace_back("zero-variance");

  bool divergent = false;
  try {
    r.f_bar = f_bar(angles, tol);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::TanDivergence) throw;
    // The time average of tan(S0/2) is infinite; both bounds degenerate to 0.
    r.f_bar = std::numeric_limits<double>::infinity();
    divergent = true;
    r.notes.emplace_back("f_bar-divergent");
  }

  const std::size_t steps = lab_step_lengths.size();
  for (std::size_t k = 0; k < steps; ++k) {
    const double a = ledger.phi_total[k];
    const double b = ledger.phi_total[k + 1];
    if (std::isnan(a) || std::isnan(b)) continue;
    const double d_phi = b - a;
    const double mid = 0.5 * (angles.s0[k] + angles.s0[k + 1]);
    r.phi_g_rot += midpoint_weight(angles.s0[k], angles.s0[k + 1]) * d_phi;

    const double d_dyn = ledger.phi_dynamical[k + 1] - ledger.phi_dynamical[k];
    const double d_geo = ledger.phi_geometric[k + 1] - ledger.phi_geometric[k];
    if (std::abs(d_dyn) > tol.sign_noise && std::abs(d_geo) > tol.sign_noise &&
        d_dyn * d_geo < 0.0) {
      ++r.sign_conflict_steps;
    }
    const double ds = lab_step_lengths[k];
    if (std::sin(mid) * std::abs(d_phi) > ds * (1.0 + 1e-9) + 1e-15) ++r.frame_excess_steps;
  }
  const double last_lab = ledger.phi_geometric.back();
  r.phi_g_lab = std::isnan(last_lab) ? 0.0 : last_lab;

  auto bound = [&](double phi_g) {
    if (divergent || mt.zero_variance) return 0.0;
    const double denom = r.delta_h * r.f_bar;
    if (!(denom > 0.0)) return 0.0;
    return traj.hbar() * std::abs(phi_g) / denom;
  };
  r.geometric_bound_rot = bound(r.phi_g_rot);
  r.geometric_bound_lab = bound(r.phi_g_lab);
  r.geometric_saturation_rot = saturation(r.T, r.geometric_bound_rot);
  r.geometric_saturation_lab = saturation(r.T, r.geometric_bound_lab);

  if (r.sign_conflict_steps > 0) {
    r.notes.emplace_back("sign-conflict: outside derivation hypotheses");
  }
  if (r.frame_excess_steps > 0) {
    r.notes.emplace_back("rotating-frame step exceeds lab step: outside derivation hypotheses");
  }
  return r;
}

}  // namespace phasefrac
