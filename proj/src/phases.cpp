#include "phasefrac/phases.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "phasefrac/error.hpp"

namespace phasefrac {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

std::vector<double> dynamical_phase(const Trajectory& traj) {
  std::vector<double> out(traj.samples(), 0.0);
  const auto& integrals = traj.step_energy_integrals();
  double acc = 0.0;
  for (std::size_t k = 0; k < traj.steps(); ++k) {
    acc += integrals[k];
    out[k + 1] = -acc / traj.hbar();
  }
  return out;
}

std::vector<double> geometric_phase(const Trajectory& traj, const AngleTrack& angles) {
  const std::size_t n = traj.samples();
  if (angles.node_flags.size() != n) {
    throw Error(ErrorCode::RangeMismatch, "angle track does not match trajectory");
  }
  std::vector<double> out(n, kNaN);
  std::vector<double> hist_t;
  std::vector<double> hist_g;

  auto chi = [&](std::size_t k) {
    const Complex c = traj.overlaps()[k];
    return Vector(std::conj(c) / std::abs(c) * traj.states()[k].amplitudes());
  };

  std::size_t last = 0;  // last non-node sample; sample 0 never is a node
  Vector chi_last = chi(0);
  out[0] = 0.0;
  hist_t.push_back(traj.times()[0]);
  hist_g.push_back(0.0);

  for (std::size_t k = 1; k < n; ++k) {
    if (angles.node_flags[k]) continue;
    const Vector chi_k = chi(k);
    const double inc = -std::arg(chi_last.dot(chi_k));
    if (k == last + 1) {
      out[k] = out[last] + inc;
    } else {
      const double target = extrapolate(hist_t, hist_g, traj.times()[k]);
      out[k] = nearest_branch(out[last] + inc, target);
    }
    last = k;
    chi_last = chi_k;
    hist_t.push_back(traj.times()[k]);
    hist_g.push_back(out[k]);
    if (hist_t.size() > 3) {
      hist_t.erase(hist_t.begin());
      hist_g.erase(hist_g.begin());
    }
  }
  return out;
}

std::vector<double> orthogonal_phase(const OrthogonalTrack& orth) {
  if (orth.present_count() < 2) {
    throw Error(ErrorCode::InsufficientSamples,
                "orthogonal phase needs at least two samples with a defined orthogonal component");
  }
  const std::size_t n = orth.states.size();
  std::vector<double> out(n, kNaN);
  double acc = 0.0;
  out[orth.defined_from] = 0.0;
  for (std::size_t k = orth.defined_from + 1; k < n; ++k) {
    if (!orth.states[k]) continue;
    if (orth.states[k - 1]) acc += std::arg(orth.states[k - 1]->inner(*orth.states[k]));
    out[k] = acc;
  }
  return out;
}

double midpoint_weight(double s0_a, double s0_b) {
  const double s = std::sin(0.25 * (s0_a + s0_b));
  return s * s;
}

namespace {

void require_lengths(std::size_t n, std::initializer_list<std::size_t> sizes) {
  for (std::size_t s : sizes) {
    if (s != n) throw Error(ErrorCode::RangeMismatch, "phase series lengths disagree");
  }
}

double increment_or_zero(const std::vector<double>& series, std::size_t k) {
  const double a = series[k];
  const double b = series[k + 1];
  return (std::isnan(a) || std::isnan(b)) ? 0.0 : b - a;
}

}  // namespace

FractionalLawResiduals verify_fractional_law(const std::vector<double>& s0,
                                             const std::vector<double>& phi_total,
                                             const std::vector<double>& phi_dynamical,
                                             const std::vector<double>& phi_geometric,
                                             const std::vector<double>& phi_orthogonal) {
  const std::size_t n = s0.size();
  require_lengths(n, {phi_total.size(), phi_dynamical.size(), phi_geometric.size(),
                      phi_orthogonal.size()});
  FractionalLawResiduals out;
  if (n < 2) return out;
  out.residual_d.assign(n - 1, kNaN);
  out.residual_g.assign(n - 1, kNaN);

  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (std::isnan(phi_total[k]) || std::isnan(phi_total[k + 1]) ||
        std::isnan(phi_geometric[k]) || std::isnan(phi_geometric[k + 1])) {
      ++out.excluded_steps;
      continue;
    }
    const double w = midpoint_weight(s0[k], s0[k + 1]);
    const double d_phi = phi_total[k + 1] - phi_total[k];
    const double d_bar = increment_or_zero(phi_orthogonal, k);
    const double d_dyn = phi_dynamical[k + 1] - phi_dynamical[k];
    const double d_geo = phi_geometric[k + 1] - phi_geometric[k];
    const double pred_d = (1.0 - w) * d_phi + w * d_bar;
    const double pred_g = w * (d_phi - d_bar);
    out.residual_d[k] = d_dyn - pred_d;
    out.residual_g[k] = d_geo - pred_g;
    out.max_abs_d = std::max(out.max_abs_d, std::abs(out.residual_d[k]));
    out.max_abs_g = std::max(out.max_abs_g, std::abs(out.residual_g[k]));
    out.predicted_sum_d += pred_d;
    out.predicted_sum_g += pred_g;
    out.measured_sum_d += d_dyn;
    out.measured_sum_g += d_geo;
    ++out.evaluated_steps;
  }
  return out;
}

std::vector<double> geometric_phase_fraction(const AngleTrack& angles) {
  std::vector<double> out(angles.s0.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double s = std::sin(0.5 * angles.s0[k]);
    out[k] = std::clamp(s * s, 0.0, 1.0);
  }
  return out;
}

GpfRatioCheck check_gpf_ratio(const std::vector<double>& s0, const std::vector<double>& phi_total,
                              const std::vector<double>& phi_geometric,
                              const std::vector<double>& phi_orthogonal, const Tolerances& tol) {
  const std::size_t n = s0.size();
  require_lengths(n, {phi_total.size(), phi_geometric.size(), phi_orthogonal.size()});
  GpfRatioCheck out;
  if (n < 2) return out;
  out.ratio.assign(n - 1, kNaN);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double ds0 = s0[k + 1] - s0[k];
    const double s_a = std::sin(0.5 * s0[k]);
    const double s_b = std::sin(0.5 * s0[k + 1]);
    const double dfg = s_b * s_b - s_a * s_a;
    if (ds0 * dfg >= 0.0) ++out.monotone_steps;

    if (std::isnan(phi_total[k]) || std::isnan(phi_total[k + 1]) ||
        std::isnan(phi_geometric[k]) || std::isnan(phi_geometric[k + 1])) {
      ++out.skipped_invalid;
      continue;
    }
    const double mismatch = (phi_total[k + 1] - phi_total[k]) - increment_or_zero(phi_orthogonal, k);
    if (std::abs(mismatch) <= tol.degenerate_mismatch) {
      ++out.skipped_degenerate;
      continue;
    }
    const double r = (phi_geometric[k + 1] - phi_geometric[k]) / mismatch;
    out.ratio[k] = r;
    out.max_deviation = std::max(out.max_deviation, std::abs(r - midpoint_weight(s0[k], s0[k + 1])));
    ++out.checked;
  }
  return out;
}

PhaseLedger build_phase_ledger(const Trajectory& traj, const AngleTrack& angles,
                               const OrthogonalTrack& orth, const Tolerances& tol) {
  PhaseLedger ledger;
  ledger.times = traj.times();
  ledger.s0 = angles.s0;
  ledger.phi_total = angles.phi_total;
  ledger.phi_dynamical = dynamical_phase(traj);
  ledger.phi_geometric = geometric_phase(traj, angles);
  // Stationary rays have no orthogonal component at all; the series stays undefined.
  ledger.phi_orthogonal = orth.present_count() >= 2 ? orthogonal_phase(orth)
                                                    : std::vector<double>(traj.samples(), kNaN);
  ledger.gpf = geometric_phase_fraction(angles);

  const std::size_t n = traj.samples();
  ledger.phi_geometric_difference.assign(n, kNaN);
  for (std::size_t k = 0; k < n; ++k) {
    if (std::isnan(ledger.phi_total[k])) continue;
    ledger.phi_geometric_difference[k] = ledger.phi_total[k] - ledger.phi_dynamical[k];
    if (!std::isnan(ledger.phi_geometric[k])) {
      ledger.additivity_max =
          std::max(ledger.additivity_max,
                   std::abs(ledger.phi_geometric_difference[k] - ledger.phi_geometric[k]));
    }
  }

  ledger.fractional_law = verify_fractional_law(ledger.s0, ledger.phi_total, ledger.phi_dynamical,
                                                ledger.phi_geometric, ledger.phi_orthogonal);
  ledger.gpf_check = check_gpf_ratio(ledger.s0, ledger.phi_total, ledger.phi_geometric,
                                     ledger.phi_orthogonal, tol);
  return ledger;
}

}  // namespace phasefrac
