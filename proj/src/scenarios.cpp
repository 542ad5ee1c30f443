#include "phasefrac/scenarios.hpp"

#include <cmath>
#include <numbers>

#include "phasefrac/error.hpp"

namespace phasefrac {

namespace {

constexpr double kPi = std::numbers::pi;

HermitianOperator pauli_z(double scale) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = scale;
  m(1, 1) = -scale;
  return HermitianOperator(std::move(m));
}

HermitianOperator pauli_x(double scale) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = scale;
  m(1, 0) = scale;
  return HermitianOperator(std::move(m));
}

QuantumState bloch_state(double theta) {
  Vector v(2);
  v << std::cos(0.5 * theta), std::sin(0.5 * theta);
  return QuantumState(v);
}

std::string degrees_label(double theta) {
  return std::to_string(static_cast<int>(std::lround(theta * 180.0 / kPi)));
}

}  // namespace

Scenario qubit_precession(double theta, double omega, std::optional<double> t_final, double hbar) {
  if (!(theta > 0.0 && theta < kPi) || !(omega > 0.0) || !std::isfinite(omega)) {
    throw Error(ErrorCode::ParamOutOfRange, "precession needs 0 < theta < pi and omega > 0");
  }
  const double T = t_final.value_or(2.0 * kPi / omega);
  const double cos_t = std::cos(theta);
  const double sin_t = std::sin(theta);
  const double cos_sq = std::cos(0.5 * theta) * std::cos(0.5 * theta);
  const double sin_sq = std::sin(0.5 * theta) * std::sin(0.5 * theta);

  ClosedFormOracle o;
  o.overlap = [=](double t) {
    return cos_sq * std::polar(1.0, -0.5 * omega * t) + sin_sq * std::polar(1.0, 0.5 * omega * t);
  };
  o.s0 = [=](double t) { return 2.0 * std::asin(std::min(1.0, sin_t * std::abs(std::sin(0.5 * omega * t)))); };
  o.phi_total = [=](double t) {
    // -arctan(cos(theta) tan(x)) continued across x = pi/2 + k pi; the branch turns
    // with the sign of cos(theta) (nodes at cos(theta) = 0 resolve to the lower branch).
    const double x = 0.5 * omega * t;
    // tan is taken of the reduced argument so both branches meet at the half-period boundary
    const double turn = cos_t >= 0.0 ? 1.0 : -1.0;
    const double k = std::round(x / kPi);
    return -(std::atan(cos_t * std::tan(x - k * kPi)) + turn * kPi * k);
  };
  o.phi_dynamical = [=](double t) { return -0.5 * omega * cos_t * t; };
  o.phi_geometric = [f = o.phi_total, d = o.phi_dynamical](double t) { return f(t) - d(t); };
  o.delta_h = 0.5 * hbar * omega * sin_t;

  Scenario s{
      "precession-th" + degrees_label(theta),
      HamiltonianSchedule::constant(pauli_z(0.5 * hbar * omega), T, hbar),
      bloch_state(theta),
      T,
      4096,
      std::move(o),
      "qubit precession about z at polar angle " + degrees_label(theta) + " deg",
  };
  return s;
}

Scenario eigenstate_scenario() {
  Vector up(2);
  up << 1.0, 0.0;
  ClosedFormOracle o;
  o.overlap = [](double t) { return std::polar(1.0, -0.5 * t); };
  o.s0 = [](double) { return 0.0; };
  o.phi_total = [](double t) { return -0.5 * t; };
  o.phi_dynamical = [](double t) { return -0.5 * t; };
  o.phi_geometric = [](double) { return 0.0; };
  o.delta_h = 0.0;
  return Scenario{
      "eigenstate",
      HamiltonianSchedule::constant(pauli_z(0.5), 2.0 * kPi),
      QuantumState(up),
      2.0 * kPi,
      4096,
      std::move(o),
      "|0> under sigma_z/2 for one period (stationary ray)",
  };
}

Scenario random_scenario(int dim, std::uint64_t seed) {
  const double T = 2.0;
  return Scenario{
      "random-d" + std::to_string(dim) + "-s" + std::to_string(seed),
      HamiltonianSchedule::constant(random_hermitian(dim, seed), T),
      random_state(dim, seed),
      T,
      4096,
      std::nullopt,
      "seeded random Hermitian system",
  };
}

Scenario two_segment_scenario() {
  std::vector<ScheduleSegment> segs{{pauli_z(0.5), kPi}, {pauli_x(0.5), kPi}};
  return Scenario{
      "two-segment",
      HamiltonianSchedule(std::move(segs)),
      bloch_state(kPi / 3.0),
      2.0 * kPi,
      4096,
      std::nullopt,
      "qubit: sigma_z/2 then sigma_x/2, piecewise-constant",
  };
}

const std::vector<Scenario>& catalog() {
  static const std::vector<Scenario> scenarios = [] {
    std::vector<Scenario> out;
    out.push_back(eigenstate_scenario());
    out.push_back(qubit_precession(kPi / 6.0, 1.0));
    out.push_back(qubit_precession(kPi / 3.0, 1.0));
    auto node = qubit_precession(kPi / 2.0, 1.0);
    node.description = "qubit precession at 90 deg over a full period; crosses a node at t = pi";
    out.push_back(std::move(node));
    auto half = qubit_precession(kPi / 2.0, 1.0, kPi);
    half.name = "precession-th90-half";
    half.description = "great-circle motion to the orthogonal state (geodesic)";
    out.push_back(std::move(half));
    out.push_back(two_segment_scenario());
    for (int dim : {2, 4, 6, 8}) {
      for (std::uint64_t seed : {1u, 2u, 3u}) out.push_back(random_scenario(dim, seed));
    }
    return out;
  }();
  return scenarios;
}

std::vector<std::string> catalog_names() {
  std::vector<std::string> names;
  for (const auto& s : catalog()) names.push_back(s.name);
  return names;
}

const Scenario& builtin_scenario(std::string_view name) {
  for (const auto& s : catalog()) {
    if (s.name == name) return s;
  }
  std::string known;
  for (const auto& n : catalog_names()) known += (known.empty() ? "" : ", ") + n;
  throw Error(ErrorCode::InvalidArgument,
              "unknown builtin scenario '" + std::string(name) + "' (known: " + known + ")");
}

}  // namespace phasefrac
