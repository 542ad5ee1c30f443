#include "phasefrac/evolution.hpp"

#include <algorithm>
#include <cmath>

#include "phasefrac/error.hpp"

namespace phasefrac {

HamiltonianSchedule::HamiltonianSchedule(std::vector<ScheduleSegment> segments, double hbar)
    : segments_(std::move(segments)), hbar_(hbar) {
  if (segments_.empty()) {
    throw Error(ErrorCode::InvalidArgument, "schedule needs at least one segment");
  }
  if (!(hbar_ > 0.0) || !std::isfinite(hbar_)) {
    throw Error(ErrorCode::InvalidArgument, "hbar must be positive and finite");
  }
  starts_.reserve(segments_.size() + 1);
  starts_.push_back(0.0);
  const Eigen::Index dim = segments_.front().hamiltonian.dim();
  for (const auto& seg : segments_) {
    if (seg.hamiltonian.dim() != dim) {
      throw Error(ErrorCode::DimensionMismatch, "schedule segments differ in dimension");
    }
    if (!(seg.duration > 0.0) || !std::isfinite(seg.duration)) {
      throw Error(ErrorCode::InvalidArgument, "segment durations must be positive and finite");
    }
    starts_.push_back(starts_.back() + seg.duration);
  }
}

HamiltonianSchedule HamiltonianSchedule::constant(HermitianOperator h, double duration,
                                                  double hbar) {
  return HamiltonianSchedule({ScheduleSegment{std::move(h), duration}}, hbar);
}

std::size_t HamiltonianSchedule::segment_at(double t) const {
  // starts_[i] <= t < starts_[i+1]
  const auto it = std::upper_bound(starts_.begin(), starts_.end() - 1, t);
  const auto idx = static_cast<std::size_t>(std::distance(starts_.begin(), it));
  return std::min(idx == 0 ? 0 : idx - 1, segments_.size() - 1);
}

HamiltonianSchedule HamiltonianSchedule::shifted(double c) const {
  std::vector<ScheduleSegment> segs;
  segs.reserve(segments_.size());
  for (const auto& s : segments_) segs.push_back({s.hamiltonian.shifted(c), s.duration});
  return HamiltonianSchedule(std::move(segs), hbar_);
}

Trajectory::Trajectory(HamiltonianSchedule schedule, TrajectoryData data, const Tolerances& tol)
    : schedule_(std::move(schedule)), data_(std::move(data)) {
  const std::size_t n = data_.times.size();
  if (n < kMinSteps + 1) {
    throw Error(ErrorCode::StepCountTooSmall, "trajectory needs at least 8 steps");
  }
  if (data_.states.size() != n || data_.overlaps.size() != n ||
      data_.energy_expectations.size() != n || data_.energy_variances.size() != n ||
      data_.step_energy_integrals.size() != n - 1) {
    throw Error(ErrorCode::RangeMismatch, "trajectory series lengths disagree");
  }
  for (const auto& s : data_.states) {
    if (s.dim() != schedule_.dim()) {
      throw Error(ErrorCode::DimensionMismatch, "trajectory state dimension differs from schedule");
    }
  }
  if (std::abs(data_.overlaps.front() - 1.0) > 1e-12) {
    throw Error(ErrorCode::NumericalFailure, "initial overlap differs from 1");
  }
  for (double& v : data_.energy_variances) {
    if (v < -tol.variance_floor) {
      throw Error(ErrorCode::NumericalFailure, "negative energy variance");
    }
    v = std::max(v, 0.0);
  }
}

namespace {

// Exact propagation through a piecewise-constant schedule.
class Propagation {
 public:
  Propagation(const QuantumState& psi0, const HamiltonianSchedule& schedule, const Tolerances& tol)
      : schedule_(schedule) {
    Vector start = psi0.amplitudes();
    for (std::size_t i = 0; i < schedule.segments().size(); ++i) {
      spectra_.push_back(spectral_decompose(schedule.segments()[i].hamiltonian, tol));
      coeffs_.push_back(spectra_.back().eigenvectors.adjoint() * start);
      start = evolve_in(i, schedule.segments()[i].duration);
    }
  }

  Vector state_at(double t) const {
    const std::size_t seg = schedule_.segment_at(t);
    return evolve_in(seg, t - schedule_.segment_start(seg));
  }

  Vector state_in(std::size_t seg, double t) const {
    return evolve_in(seg, t - schedule_.segment_start(seg));
  }

  // Mean and variance from eigenbasis populations of the given segment.
  std::pair<double, double> moments(std::size_t seg, const Vector& psi) const {
    const auto& spec = spectra_[seg];
    const Vector amp = spec.eigenvectors.adjoint() * psi;
    double mean = 0.0;
    for (Eigen::Index k = 0; k < amp.size(); ++k) mean += std::norm(amp[k]) * spec.eigenvalues[k];
    double var = 0.0;
    for (Eigen::Index k = 0; k < amp.size(); ++k) {
      const double d = spec.eigenvalues[k] - mean;
      var += std::norm(amp[k]) * d * d;
    }
    return {mean, var};
  }

 private:
  Vector evolve_in(std::size_t seg, double dt) const {
    const auto& spec = spectra_[seg];
    Vector phased = coeffs_[seg];
    for (Eigen::Index k = 0; k < phased.size(); ++k) {
      phased[k] *= std::polar(1.0, -spec.eigenvalues[k] * dt / schedule_.hbar());
    }
    return spec.eigenvectors * phased;
  }

  const HamiltonianSchedule& schedule_;
  std::vector<SpectralDecomposition> spectra_;
  std::vector<Vector> coeffs_;
};

}  // namespace

Trajectory evolve(const QuantumState& psi0, const HamiltonianSchedule& schedule, int steps,
                  const Tolerances& tol) {
  if (steps < kMinSteps) {
    throw Error(ErrorCode::StepCountTooSmall, "need at least 8 steps, got " + std::to_string(steps));
  }
  if (psi0.dim() != schedule.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "initial state and Hamiltonian dimensions differ");
  }
  if (std::abs(psi0.amplitudes().norm() - 1.0) > tol.normalization) {
    throw Error(ErrorCode::UnnormalizedState, "initial state is not normalized");
  }

  const Propagation prop(psi0, schedule, tol);
  const double total = schedule.total_duration();
  const auto n = static_cast<std::size_t>(steps);

  TrajectoryData data;
  data.times.resize(n + 1);
  data.states.reserve(n + 1);
  data.overlaps.resize(n + 1);
  data.energy_expectations.resize(n + 1);
  data.energy_variances.resize(n + 1);
  data.step_energy_integrals.resize(n);

  for (std::size_t k = 0; k <= n; ++k) {
    const double t = k == n ? total : total * static_cast<double>(k) / static_cast<double>(n);
    data.times[k] = t;
    Vector psi = k == 0 ? psi0.amplitudes() : prop.state_at(t);
    // Renormalize away roundoff drift; exact propagation keeps it at ~1e-15.
    psi /= psi.norm();
    const auto [mean, var] = prop.moments(schedule.segment_at(t), psi);
    data.energy_expectations[k] = mean;
    data.energy_variances[k] = var;
    data.overlaps[k] = psi0.amplitudes().dot(psi);
    data.states.emplace_back(std::move(psi), tol.normalization);
  }
  data.overlaps[0] = 1.0;

  for (std::size_t k = 0; k < n; ++k) {
    const double a = data.times[k];
    const double b = data.times[k + 1];
    std::vector<double> cuts{a};
    for (std::size_t s = 1; s < schedule.segments().size(); ++s) {
      const double start = schedule.segment_start(s);
      if (start > a && start < b) cuts.push_back(start);
    }
    cuts.push_back(b);
    double integral = 0.0;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double lo = cuts[c];
      const double hi = cuts[c + 1];
      const std::size_t seg = schedule.segment_at(0.5 * (lo + hi));
      const double e_lo = prop.moments(seg, prop.state_in(seg, lo)).first;
      const double e_hi = prop.moments(seg, prop.state_in(seg, hi)).first;
      integral += 0.5 * (hi - lo) * (e_lo + e_hi);
    }
    data.step_energy_integrals[k] = integral;
  }

  return Trajectory(schedule, std::move(data), tol);
}

Trajectory refine(const Trajectory& traj, int factor, const Tolerances& tol) {
  if (factor < 2) throw Error(ErrorCode::InvalidArgument, "refinement factor must be at least 2");
  return evolve(traj.initial(), traj.schedule(), static_cast<int>(traj.steps()) * factor, tol);
}

Trajectory downsample(const Trajectory& traj, int factor) {
  if (factor < 1 || traj.steps() % static_cast<std::size_t>(factor) != 0) {
    throw Error(ErrorCode::InvalidArgument, "downsample factor must divide the step count");
  }
  const auto f = static_cast<std::size_t>(factor);
  TrajectoryData data;
  for (std::size_t k = 0; k < traj.samples(); k += f) {
    data.times.push_back(traj.times()[k]);
    data.states.push_back(traj.states()[k]);
    data.overlaps.push_back(traj.overlaps()[k]);
    data.energy_expectations.push_back(traj.energy_expectations()[k]);
    data.energy_variances.push_back(traj.energy_variances()[k]);
  }
  for (std::size_t k = 0; k < traj.steps(); k += f) {
    double sum = 0.0;
    for (std::size_t j = k; j < k + f; ++j) sum += traj.step_energy_integrals()[j];
    data.step_energy_integrals.push_back(sum);
  }
  return Trajectory(traj.schedule(), std::move(data));
}

double energy_variance_direct(const HermitianOperator& h, const Vector& psi) {
  const Vector hpsi = h.matrix() * psi;
  const double mean = psi.dot(hpsi).real();
  return hpsi.squaredNorm() - mean * mean;
}

}  // namespace phasefrac
