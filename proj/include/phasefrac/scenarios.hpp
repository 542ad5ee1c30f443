#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phasefrac/evolution.hpp"

namespace phasefrac {

/// Closed-form reference values for a scenario; derivations in docs/precession_oracle.md.
struct ClosedFormOracle {
  std::function<Complex(double)> overlap;
  std::function<double(double)> s0;
  std::function<double(double)> phi_total;  // continuous branch, phi(0) = 0
  std::function<double(double)> phi_dynamical;
  std::function<double(double)> phi_geometric;
  double delta_h = 0.0;
};

struct Scenario {
  std::string name;
  HamiltonianSchedule schedule;
  QuantumState psi0;
  double t_final = 0.0;
  int default_steps = 4096;
  std::optional<ClosedFormOracle> oracle;
  std::string description;
};

/// H = (hbar omega / 2) sigma_z, psi0 = cos(theta/2)|0> + sin(theta/2)|1>.
/// t_final defaults to one period 2 pi / omega. Throws ParamOutOfRange unless
/// 0 < theta < pi and omega > 0.
Scenario qubit_precession(double theta, double omega, std::optional<double> t_final = std::nullopt,
                          double hbar = 1.0);

/// |0> under (omega/2) sigma_z for one period.
Scenario eigenstate_scenario();

/// random_hermitian(dim, seed) with random_state(dim, seed), t_final = 2.
Scenario random_scenario(int dim, std::uint64_t seed);

/// Qubit at theta = pi/3: sigma_z/2 for t in [0, pi), then sigma_x/2 until 2 pi.
Scenario two_segment_scenario();

/// Built-in catalog in a fixed order.
const std::vector<Scenario>& catalog();

std::vector<std::string> catalog_names();

/// Throws InvalidArgument for unknown names.
const Scenario& builtin_scenario(std::string_view name);

}  // namespace phasefrac
