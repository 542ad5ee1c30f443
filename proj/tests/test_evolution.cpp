#include <doctest.h>

#include "support.hpp"

using namespace phasefrac;
using testing::near;
using testing::pi;

TEST_CASE("eigenstate picks up only a phase") {
  const Scenario s = eigenstate_scenario();
  const Trajectory traj = evolve(s.psi0, s.schedule, 64);
  for (std::size_t k = 0; k < traj.samples(); ++k) {
    const Complex expected = std::exp(Complex(0.0, -traj.times()[k] / 2.0));
    CHECK(std::abs(traj.overlaps()[k] - expected) <= 1e-13);
    CHECK(near(traj.energy_variances()[k], 0.0, 1e-14));
  }
}

TEST_CASE("zero Hamiltonian leaves the state alone") {
  const auto sched = HamiltonianSchedule::constant(HermitianOperator(Matrix::Zero(3, 3)), 1.5);
  const Trajectory traj = evolve(random_state(3, 1), sched, 16);
  for (const auto& c : traj.overlaps()) CHECK(std::abs(c - Complex(1.0)) <= 1e-14);
  for (double e : traj.step_energy_integrals()) CHECK(e == 0.0);
}

TEST_CASE("equatorial precession reaches the orthogonal state at half period") {
  const Scenario s = builtin_scenario("precession-th90-half");
  const Trajectory traj = evolve(s.psi0, s.schedule, 128);
  CHECK(std::abs(traj.overlaps().back()) <= 1e-10);
  CHECK(near(traj.duration(), pi, 1e-15));
}

TEST_CASE("refine and downsample are inverse on the coarse grid") {
  const Scenario s = random_scenario(4, 2);
  const Trajectory coarse = evolve(s.psi0, s.schedule, 32);
  const Trajectory fine = refine(coarse, 4);
  REQUIRE(fine.steps() == 128);
  for (std::size_t k = 0; k < coarse.samples(); ++k) {
    CHECK(std::abs(fine.overlaps()[4 * k] - coarse.overlaps()[k]) <= 1e-12);
  }
  const Trajectory back = downsample(fine, 4);
  REQUIRE(back.steps() == 32);
  for (std::size_t k = 0; k < coarse.samples(); ++k) {
    CHECK(std::abs(back.overlaps()[k] - coarse.overlaps()[k]) <= 1e-12);
    CHECK(near(back.times()[k], coarse.times()[k], 1e-15));
  }
}

TEST_CASE("variance agrees between the eigenbasis and the direct form") {
  const Scenario s = random_scenario(6, 9);
  const Trajectory traj = evolve(s.psi0, s.schedule, 16);
  const auto& h = s.schedule.segments().front().hamiltonian;
  for (std::size_t k = 0; k < traj.samples(); ++k) {
    const double direct = energy_variance_direct(h, traj.states()[k].amplitudes());
    CHECK(near(traj.energy_variances()[k], direct, 1e-12));
    // Delta H is conserved under a time-independent Hamiltonian
    CHECK(near(traj.energy_variances()[k], traj.energy_variances()[0], 1e-12));
  }
}

TEST_CASE("overlaps chain through the stored states") {
  const Scenario s = random_scenario(5, 4);
  const Trajectory traj = evolve(s.psi0, s.schedule, 20);
  for (std::size_t k = 0; k < traj.samples(); ++k) {
    CHECK(std::abs(traj.initial().inner(traj.states()[k]) - traj.overlaps()[k]) <= 1e-15);
    CHECK(near(traj.states()[k].amplitudes().norm(), 1.0, 1e-13));
  }
}

TEST_CASE("piecewise schedule switches at the boundary") {
  const Scenario s = two_segment_scenario();
  CHECK_FALSE(s.schedule.time_independent());
  CHECK(s.schedule.segment_at(0.0) == 0);
  CHECK(s.schedule.segment_at(pi) == 1);
  CHECK(s.schedule.segment_at(10.0) == 1);
  const Trajectory traj = evolve(s.psi0, s.schedule, 64);
  // exact propagation: the midpoint equals a direct sigma_z evolution
  const Matrix u = propagator(HermitianOperator(0.5 * testing::pauli_z()), pi, 1.0);
  const Vector expected = u * s.psi0.amplitudes();
  CHECK(max_abs(Vector(traj.states()[32].amplitudes() - expected)) <= 1e-13);
}

TEST_CASE("too few steps") {
  const Scenario s = eigenstate_scenario();
  try {
    evolve(s.psi0, s.schedule, kMinSteps - 1);
    FAIL("accepted too few steps");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StepCountTooSmall);
  }
  try {
    evolve(random_state(3, 0), s.schedule, 16);
    FAIL("accepted a mismatched state");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}
