#pragma once

#include <cstddef>
#include <vector>

#include "phasefrac/numerics.hpp"

namespace phasefrac {

struct ScheduleSegment {
  HermitianOperator hamiltonian;
  double duration;
};

/// Piecewise-constant Hamiltonian. A single segment is the time-independent case.
class HamiltonianSchedule {
 public:
  HamiltonianSchedule(std::vector<ScheduleSegment> segments, double hbar = 1.0);
  static HamiltonianSchedule constant(HermitianOperator h, double duration, double hbar = 1.0);

  const std::vector<ScheduleSegment>& segments() const noexcept { return segments_; }
  double hbar() const noexcept { return hbar_; }
  Eigen::Index dim() const noexcept { return segments_.front().hamiltonian.dim(); }
  double total_duration() const noexcept { return starts_.back(); }
  bool time_independent() const noexcept { return segments_.size() == 1; }

  /// Start time of segment i; segment_start(size()) is the total duration.
  double segment_start(std::size_t i) const { return starts_.at(i); }

  /// Segment active at t. Right-continuous at boundaries; t >= total maps to the last segment.
  std::size_t segment_at(double t) const;

  /// Same schedule with every Hamiltonian shifted by c * identity.
  HamiltonianSchedule shifted(double c) const;

 private:
  std::vector<ScheduleSegment> segments_;
  std::vector<double> starts_;
  double hbar_;
};

/// Raw trajectory contents; Trajectory validates them on construction.
struct TrajectoryData {
  std::vector<double> times;
  std::vector<QuantumState> states;
  std::vector<Complex> overlaps;             // <psi(0)|psi(t_k)>
  std::vector<double> energy_expectations;   // <H(t_k)>, right-continuous at segment boundaries
  std::vector<double> energy_variances;      // Delta H^2(t_k), clamped at zero
  std::vector<double> step_energy_integrals; // integral of <H> over each step, split at boundaries
};

class Trajectory {
 public:
  Trajectory(HamiltonianSchedule schedule, TrajectoryData data,
             const Tolerances& tol = default_tolerances());

  const HamiltonianSchedule& schedule() const noexcept { return schedule_; }
  const QuantumState& initial() const noexcept { return data_.states.front(); }
  const std::vector<double>& times() const noexcept { return data_.times; }
  const std::vector<QuantumState>& states() const noexcept { return data_.states; }
  const std::vector<Complex>& overlaps() const noexcept { return data_.overlaps; }
  const std::vector<double>& energy_expectations() const noexcept { return data_.energy_expectations; }
  const std::vector<double>& energy_variances() const noexcept { return data_.energy_variances; }
  const std::vector<double>& step_energy_integrals() const noexcept {
    return data_.step_energy_integrals;
  }

  std::size_t steps() const noexcept { return data_.times.size() - 1; }
  std::size_t samples() const noexcept { return data_.times.size(); }
  double duration() const noexcept { return data_.times.back(); }
  double step_size() const noexcept { return duration() / static_cast<double>(steps()); }
  double hbar() const noexcept { return schedule_.hbar(); }

 private:
  HamiltonianSchedule schedule_;
  TrajectoryData data_;
};

inline constexpr int kMinSteps = 8;

/// Samples psi(t_k) = U(t_k) psi0 on t_k = k T / steps with exact segment propagators.
Trajectory evolve(const QuantumState& psi0, const HamiltonianSchedule& schedule, int steps,
                  const Tolerances& tol = default_tolerances());

/// Re-evolves on a grid `factor` times finer; every coarse sample reappears at index k*factor.
Trajectory refine(const Trajectory& traj, int factor,
                  const Tolerances& tol = default_tolerances());

/// Keeps every `factor`-th sample. steps() must be divisible by factor.
Trajectory downsample(const Trajectory& traj, int factor);

/// Delta H^2 as <H^2> - <H>^2, the second route to the cached eigenbasis variance.
double energy_variance_direct(const HermitianOperator& h, const Vector& psi);

}  // namespace phasefrac
