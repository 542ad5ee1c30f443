#include "phasefrac/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "phasefrac/error.hpp"

namespace phasefrac {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool step_touches_node(const AngleTrack& angles, std::size_t k) {
  return angles.node_flags[k] || angles.node_flags[k + 1];
}

void require_steps(const std::vector<double>& lengths, const AngleTrack& angles) {
  if (lengths.size() + 1 != angles.s0.size()) {
    throw Error(ErrorCode::RangeMismatch, "step lengths do not match the angle track");
  }
}

}  // namespace

double fs_distance(const Vector& a, const Vector& b) {
  const Complex ov = a.dot(b);
  const double perp = (b - ov * a).norm();
  return 2.0 * std::atan2(perp, std::abs(ov));
}

StepLengths fs_step_lengths(const Trajectory& traj) {
  StepLengths out;
  const std::size_t n = traj.steps();
  out.overlap_form.resize(n);
  out.variance_form.resize(n);
  const double dt = traj.step_size();
  for (std::size_t k = 0; k < n; ++k) {
    out.overlap_form[k] =
        fs_distance(traj.states()[k].amplitudes(), traj.states()[k + 1].amplitudes());
    out.variance_form[k] = 2.0 * std::sqrt(traj.energy_variances()[k]) * dt / traj.hbar();
  }
  return out;
}

PathLength total_length(const Trajectory& traj) {
  const StepLengths steps = fs_step_lengths(traj);
  PathLength out;
  for (double d : steps.overlap_form) out.overlap_form += d;
  const auto& var = traj.energy_variances();
  for (std::size_t k = 0; k < traj.steps(); ++k) {
    const double dt = traj.times()[k + 1] - traj.times()[k];
    out.variance_form += (std::sqrt(var[k]) + std::sqrt(var[k + 1])) * dt / traj.hbar();
  }
  const double scale = std::max(std::abs(out.overlap_form), std::abs(out.variance_form));
  out.relative_difference = scale > 0.0 ? std::abs(out.overlap_form - out.variance_form) / scale : 0.0;
  return out;
}

EffectiveRotatingState rotating_frame_state(const AngleTrack& angles) {
  EffectiveRotatingState out;
  out.components.reserve(angles.s0.size());
  for (std::size_t k = 0; k < angles.s0.size(); ++k) {
    const double half = 0.5 * angles.s0[k];
    // At a node cos(S0/2) vanishes, so the undefined phase drops out.
    const double phi = angles.node_flags[k] ? 0.0 : angles.phi_total[k];
    out.components.push_back({std::polar(std::cos(half), phi), Complex(std::sin(half), 0.0)});
  }
  return out;
}

MetricResiduals verify_metric_identities(const AngleTrack& angles,
                                         const EffectiveRotatingState& effective,
                                         const std::vector<double>& lab_step_lengths) {
  require_steps(lab_step_lengths, angles);
  if (effective.components.size() != angles.s0.size()) {
    throw Error(ErrorCode::RangeMismatch, "effective state does not match the angle track");
  }
  const std::size_t n = lab_step_lengths.size();
  MetricResiduals out;
  out.rotating.assign(n, kNaN);
  out.rotating_product.assign(n, kNaN);
  out.lab.assign(n, kNaN);

  for (std::size_t k = 0; k < n; ++k) {
    if (step_touches_node(angles, k)) continue;
    Vector a(2), b(2);
    a << effective.components[k][0], effective.components[k][1];
    b << effective.components[k + 1][0], effective.components[k + 1][1];
    const double ds_eff = fs_distance(a, b);
    const double ds0 = angles.s0[k + 1] - angles.s0[k];
    const double d_phi = angles.phi_total[k + 1] - angles.phi_total[k];
    const double mid = 0.5 * (angles.s0[k] + angles.s0[k + 1]);
    const double sin_mid = std::sin(mid);
    const double c2 = std::cos(0.5 * mid) * std::cos(0.5 * mid);
    const double s2 = std::sin(0.5 * mid) * std::sin(0.5 * mid);

    const double sphere = ds0 * ds0 + sin_mid * sin_mid * d_phi * d_phi;
    const double product = ds0 * ds0 + 4.0 * (c2 * d_phi) * (s2 * d_phi);
    out.rotating[k] = ds_eff * ds_eff - sphere;
    out.rotating_product[k] = ds_eff * ds_eff - product;
    out.lab[k] = lab_step_lengths[k] * lab_step_lengths[k] - sphere;

    out.max_rotating = std::max(out.max_rotating, std::abs(out.rotating[k]));
    out.max_rotating_product = std::max(out.max_rotating_product, std::abs(out.rotating_product[k]));
    out.max_form_disagreement =
        std::max(out.max_form_disagreement, std::abs(out.rotating[k] - out.rotating_product[k]));
    out.max_lab = std::max(out.max_lab, std::abs(out.lab[k]));
  }
  return out;
}

Circuitousness circuitousness(const std::vector<double>& lab_step_lengths,
                              const AngleTrack& angles) {
  require_steps(lab_step_lengths, angles);
  Circuitousness out;
  out.per_step.resize(lab_step_lengths.size());
  out.cumulative.assign(angles.s0.size(), 0.0);
  for (std::size_t k = 0; k < lab_step_lengths.size(); ++k) {
    out.per_step[k] = lab_step_lengths[k] - std::abs(angles.s0[k + 1] - angles.s0[k]);
    out.cumulative[k + 1] = out.cumulative[k] + out.per_step[k];
  }
  return out;
}

KernelGamma kernel_and_gamma(const std::vector<double>& lab_step_lengths,
                             const AngleTrack& angles, const Tolerances& tol) {
  require_steps(lab_step_lengths, angles);
  const std::size_t n = lab_step_lengths.size();
  KernelGamma out;
  out.gamma.assign(n, kNaN);
  out.kernel.assign(n, kNaN);

  for (std::size_t k = 0; k < n; ++k) {
    const double ds = lab_step_lengths[k];
    if (!(ds > tol.turn)) continue;
    const double ds0 = angles.s0[k + 1] - angles.s0[k];
    const double ratio = ds0 / ds;
    const double radicand = 1.0 - ratio * ratio;
    out.max_unclamped_gamma_sq = std::max(out.max_unclamped_gamma_sq, radicand);
    if (radicand < 0.0) ++out.clamped_steps;
    const double gamma = std::sqrt(std::clamp(radicand, 0.0, 1.0));
    out.gamma[k] = gamma;

    // The turn guard applies to gamma^2, the computed quantity: sqrt lifts radicand roundoff
    // (~1e-16) to ~1e-8 in gamma, which would otherwise pass as genuine transverse motion.
    if (step_touches_node(angles, k) || std::abs(ds0) <= tol.turn || gamma * gamma <= tol.turn) {
      continue;
    }
    const double d_phi = angles.phi_total[k + 1] - angles.phi_total[k];
    const double mid = 0.5 * (angles.s0[k] + angles.s0[k + 1]);
    const double kernel = std::sin(mid) / gamma * (d_phi / ds0);
    out.kernel[k] = kernel;
    out.kernel_length += std::abs(kernel) * std::abs(ds0);
    out.direct_length += ds;
  }
  out.relative_discrepancy =
      out.direct_length > 0.0 ? std::abs(out.kernel_length - out.direct_length) / out.direct_length
                              : 0.0;
  return out;
}

GeometryReport build_geometry_report(const Trajectory& traj, const AngleTrack& angles,
                                     const Tolerances& tol) {
  GeometryReport r;
  r.times = traj.times();
  r.step_lengths = fs_step_lengths(traj);
  const auto& lengths = r.step_lengths.overlap_form;
  r.ds0.resize(traj.steps());
  r.cumulative_length.assign(traj.samples(), 0.0);
  for (std::size_t k = 0; k < traj.steps(); ++k) {
    r.ds0[k] = angles.s0[k + 1] - angles.s0[k];
    r.cumulative_length[k + 1] = r.cumulative_length[k] + lengths[k];
  }
  const PathLength total = total_length(traj);
  r.total_length = r.cumulative_length.back();
  r.total_length_variance_form = total.variance_form;
  r.geodesic_angle = angles.s0.back();
  r.circuit = circuitousness(lengths, angles);
  r.kernel = kernel_and_gamma(lengths, angles, tol);
  r.metric = verify_metric_identities(angles, rotating_frame_state(angles), lengths);
  return r;
}

}  // namespace phasefrac
