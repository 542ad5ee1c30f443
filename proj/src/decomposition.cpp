#include "phasefrac/decomposition.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "phasefrac/error.hpp"

namespace phasefrac {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kPi = std::numbers::pi;

void require_normalized(const QuantumState& s, const Tolerances& tol) {
  if (std::abs(s.amplitudes().norm() - 1.0) > tol.normalization) {
    throw Error(ErrorCode::UnnormalizedState, "decomposition input is not normalized");
  }
}

std::string time_label(double t) {
  std::ostringstream os;
  os.precision(17);
  os << "t=" << t;
  return os.str();
}

}  // namespace

UnitaryDecomposition decompose_unitary_action(const QuantumState& psi, const QuantumState& u_psi,
                                              const Tolerances& tol) {
  if (psi.dim() != u_psi.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "decomposition inputs differ in dimension");
  }
  require_normalized(psi, tol);
  require_normalized(u_psi, tol);

  UnitaryDecomposition out;
  out.mean = psi.inner(u_psi);
  const Vector perp = u_psi.amplitudes() - out.mean * psi.amplitudes();
  out.delta = std::min(perp.norm(), 1.0);
  if (out.delta > tol.node) {
    out.orthogonal.emplace(perp / perp.norm(), tol.normalization);
  }
  return out;
}

std::size_t AngleTrack::node_count() const {
  std::size_t n = 0;
  for (bool f : node_flags) n += f ? 1 : 0;
  return n;
}

std::size_t OrthogonalTrack::present_count() const {
  std::size_t n = 0;
  for (const auto& s : states) n += s.has_value() ? 1 : 0;
  return n;
}

double nearest_branch(double raw, double target) {
  const double turns = (target - raw) / (2.0 * kPi);
  const double lo = raw + 2.0 * kPi * std::floor(turns);
  const double hi = lo + 2.0 * kPi;
  const double d_lo = std::abs(target - lo);
  const double d_hi = std::abs(hi - target);
  if (std::abs(d_lo - d_hi) <= 1e-9) return lo;
  return d_lo < d_hi ? lo : hi;
}

double extrapolate(const std::vector<double>& ts, const std::vector<double>& ys, double t) {
  double out = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    double weight = 1.0;
    for (std::size_t j = 0; j < ts.size(); ++j) {
      if (j != i) weight *= (t - ts[j]) / (ts[i] - ts[j]);
    }
    out += weight * ys[i];
  }
  return out;
}

AngleTrack angle_track(const Trajectory& traj, NodePolicy policy, const Tolerances& tol) {
  const std::size_t n = traj.samples();
  const auto& c = traj.overlaps();
  const QuantumState& psi0 = traj.initial();

  AngleTrack out;
  out.times = traj.times();
  out.s0.resize(n);
  out.phi_total.assign(n, kNaN);
  out.node_flags.assign(n, false);

  // Recent non-node samples, used to extrapolate across nodes.
  std::vector<double> hist_t;
  std::vector<double> hist_phi;

  for (std::size_t k = 0; k < n; ++k) {
    const double mag = std::abs(c[k]);
    const double delta =
        std::min((traj.states()[k].amplitudes() - c[k] * psi0.amplitudes()).norm(), 1.0);
    out.s0[k] = 2.0 * std::atan2(delta, mag);

    if (mag <= tol.node) {
      out.node_flags[k] = true;
      if (policy == NodePolicy::Strict) {
        throw Error(ErrorCode::NodeEncountered,
                    "overlap with the initial state vanishes at " + time_label(traj.times()[k]));
      }
      continue;
    }

    if (k == 0) {
      out.phi_total[0] = 0.0;
    } else if (!out.node_flags[k - 1]) {
      const double inc = std::arg(c[k] * std::conj(c[k - 1]));
      if (std::abs(inc) >= kPi / 2.0) {
        throw Error(ErrorCode::PhaseResolutionExceeded,
                    "overlap phase turns by " + std::to_string(inc) + " rad in one step ending at " +
                        time_label(traj.times()[k]) + "; refine the trajectory (more steps)");
      }
      out.phi_total[k] = out.phi_total[k - 1] + inc;
    } else {
      const double target = extrapolate(hist_t, hist_phi, traj.times()[k]);
      out.phi_total[k] = nearest_branch(std::arg(c[k]), target);
    }

    hist_t.push_back(traj.times()[k]);
    hist_phi.push_back(out.phi_total[k]);
    if (hist_t.size() > 3) {
      hist_t.erase(hist_t.begin());
      hist_phi.erase(hist_phi.begin());
    }
  }
  return out;
}

OrthogonalTrack orthogonal_track(const Trajectory& traj, const Tolerances& tol) {
  OrthogonalTrack out;
  out.states.reserve(traj.samples());
  out.defined_from = traj.samples();
  for (std::size_t k = 0; k < traj.samples(); ++k) {
    auto dec = decompose_unitary_action(traj.initial(), traj.states()[k], tol);
    if (dec.orthogonal && out.defined_from == traj.samples()) out.defined_from = k;
    out.states.push_back(std::move(dec.orthogonal));
  }
  return out;
}

double theorem_reconstruction_residual(const Trajectory& traj, const AngleTrack& angles,
                                       const OrthogonalTrack& orth, std::size_t k) {
  const double half = 0.5 * angles.s0[k];
  const double phi = angles.node_flags[k] ? 0.0 : angles.phi_total[k];
  Vector rebuilt = std::cos(half) * std::polar(1.0, phi) * traj.initial().amplitudes();
  if (orth.states[k]) rebuilt += std::sin(half) * orth.states[k]->amplitudes();
  return max_abs(Vector(rebuilt - traj.states()[k].amplitudes()));
}

}  // namespace phasefrac
