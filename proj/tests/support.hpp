#pragma once

#include <cmath>
#include <numbers>

#include "phasefrac/error.hpp"
#include "phasefrac/pipeline.hpp"

namespace testing {

inline constexpr double pi = std::numbers::pi;

inline bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

inline phasefrac::Matrix pauli_x() {
  phasefrac::Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline phasefrac::Matrix pauli_z() {
  phasefrac::Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline phasefrac::QuantumState basis(int dim, int i) {
  phasefrac::Vector v = phasefrac::Vector::Zero(dim);
  v[i] = 1.0;
  return phasefrac::QuantumState(v);
}

// Scenario with every Hamiltonian shifted by c * identity.
inline phasefrac::Scenario shifted(const phasefrac::Scenario& s, double c) {
  phasefrac::Scenario out = s;
  out.schedule = s.schedule.shifted(c);
  out.oracle.reset();
  return out;
}

}  // namespace testing
