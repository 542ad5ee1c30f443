#include "phasefrac/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "phasefrac/error.hpp"

namespace phasefrac {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kPi = std::numbers::pi;

// Second-order finite-difference derivative of a sampled vector path at index k,
// restricted to the contiguous run [lo, hi].
Vector fd_derivative(const std::vector<Vector>& path, std::size_t k, std::size_t lo,
                     std::size_t hi, double h) {
  if (k == lo) return (-3.0 * path[k] + 4.0 * path[k + 1] - path[k + 2]) / (2.0 * h);
  if (k == hi) return (3.0 * path[k] - 4.0 * path[k - 1] + path[k - 2]) / (2.0 * h);
  return (path[k + 1] - path[k - 1]) / (2.0 * h);
}

// Cumulative trapezoid of Im <v|dv/dt> over contiguous runs of defined samples. Stencils
// never reach across a sample flagged in `breaks` (a Hamiltonian switch, where the path has a
// kink); the integral simply continues on the other side. Returns NaN where undefined.
std::vector<double> fd_connection_series(const std::vector<std::optional<Vector>>& path,
                                         const std::vector<bool>& breaks, double h) {
  const std::size_t n = path.size();
  std::vector<double> out(n, kNaN);
  std::vector<Vector> dense(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (path[k]) dense[k] = *path[k];
  }
  double acc = 0.0;
  std::size_t k = 0;
  while (k < n) {
    if (!path[k]) {
      ++k;
      continue;
    }
    std::size_t hi = k;
    while (hi + 1 < n && path[hi + 1]) ++hi;
    out[k] = acc;
    // pieces [lo, b] split at interior breaks
    std::size_t lo = k;
    while (lo < hi) {
      std::size_t b = lo + 1;
      while (b < hi && !breaks[b]) ++b;
      if (b - lo >= 2) {
        double prev = dense[lo].dot(fd_derivative(dense, lo, lo, b, h)).imag();
        for (std::size_t j = lo + 1; j <= b; ++j) {
          const double cur = dense[j].dot(fd_derivative(dense, j, lo, b, h)).imag();
          acc += 0.5 * h * (prev + cur);
          out[j] = acc;
          prev = cur;
        }
      } else {
        // single step: two-point difference
        const double g = dense[lo].dot((dense[b] - dense[lo]) / h).imag();
        acc += h * g;
        out[b] = acc;
      }
      lo = b;
    }
    k = hi + 1;
  }
  return out;
}

std::vector<bool> segment_breaks(const Trajectory& traj) {
  const auto& sched = traj.schedule();
  std::vector<bool> breaks(traj.samples(), false);
  const double eps = 1e-12 * std::max(1.0, traj.duration());
  for (std::size_t i = 1; i < sched.segments().size(); ++i) {
    const double t = sched.segment_start(i);
    for (std::size_t k = 0; k < traj.samples(); ++k) {
      if (std::abs(traj.times()[k] - t) <= eps) breaks[k] = true;
    }
  }
  return breaks;
}

// 1 - |<a|b>|^2 for unit vectors through the Lagrange identity, free of the cancellation
// that makes arccos|<a|b>| inaccurate for nearly parallel states.
double gram_deficit(const Vector& a, const Vector& b) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    for (Eigen::Index j = i + 1; j < a.size(); ++j) sum += std::norm(a[i] * b[j] - a[j] * b[i]);
  }
  return sum;
}

double gram_angle(const Vector& a, const Vector& b) {
  return 2.0 * std::atan2(std::sqrt(gram_deficit(a, b)), std::abs(a.dot(b)));
}

Vector reference_state(const Trajectory& traj, std::size_t k) {
  const Complex c = traj.overlaps()[k];
  return std::conj(c) / std::abs(c) * traj.states()[k].amplitudes();
}

double trapezoid_connection(const Trajectory& traj, std::size_t stride) {
  const std::vector<bool> all_breaks = segment_breaks(traj);
  std::vector<std::optional<Vector>> chi;
  std::vector<bool> breaks;
  for (std::size_t k = 0; k < traj.samples(); k += stride) {
    chi.emplace_back(reference_state(traj, k));
    breaks.push_back(all_breaks[k]);
  }
  const double h = traj.step_size() * static_cast<double>(stride);
  return -fd_connection_series(chi, breaks, h).back();
}

double lower_nearest(double raw, double target) {
  const double turns = (target - raw) / (2.0 * kPi);
  const double lo = raw + 2.0 * kPi * std::floor(turns);
  const double hi = lo + 2.0 * kPi;
  return (target - lo) <= (hi - target) + 1e-9 ? lo : hi;
}

}  // namespace

double fd_connection_integral(const Trajectory& traj, const Tolerances& tol) {
  if (traj.samples() < 16) {
    throw Error(ErrorCode::InsufficientSamples, "finite-difference connection needs 16 samples");
  }
  if (traj.steps() % 2 != 0) {
    throw Error(ErrorCode::InvalidArgument, "Richardson extrapolation needs an even step count");
  }
  for (std::size_t k = 0; k < traj.samples(); ++k) {
    if (std::abs(traj.overlaps()[k]) <= tol.node) {
      throw Error(ErrorCode::NodeEncountered, "reference state undefined at sample " + std::to_string(k));
    }
  }
  const double fine = trapezoid_connection(traj, 1);
  const std::vector<bool> breaks = segment_breaks(traj);
  for (std::size_t k = 1; k < breaks.size(); k += 2) {
    if (breaks[k]) return fine;  // the coarse grid would step over a switch
  }
  const double coarse = trapezoid_connection(traj, 2);
  return (4.0 * fine - coarse) / 3.0;
}

BruteForceLedger recompute_ledger_bruteforce(const Trajectory& traj, const Tolerances& tol) {
  const std::size_t n = traj.samples();
  const double h = traj.step_size();
  const auto& c = traj.overlaps();
  const Vector& psi0 = traj.initial().amplitudes();
  BruteForceLedger b;

  // Angles from the Gram determinant, the total phase straight from the overlap.
  b.s0.resize(n);
  b.gpf.resize(n);
  b.phi_total.assign(n, kNaN);
  double last_phi = 0.0;
  double last_raw = 0.0;
  bool after_gap = false;
  for (std::size_t k = 0; k < n; ++k) {
    const double mag = std::abs(c[k]);
    b.s0[k] = gram_angle(psi0, traj.states()[k].amplitudes());
    b.gpf[k] = 1.0 - std::norm(c[k]);
    if (mag <= tol.node) {
      after_gap = true;
      continue;
    }
    const double raw = std::arg(c[k]);
    if (k == 0) {
      last_phi = 0.0;
    } else if (after_gap) {
      last_phi = lower_nearest(raw, last_phi);
    } else {
      double diff = raw - last_raw;
      diff -= 2.0 * kPi * std::round(diff / (2.0 * kPi));
      last_phi += diff;
    }
    last_raw = raw;
    after_gap = false;
    b.phi_total[k] = last_phi;
  }

  // Dynamical phase: Simpson on every piece of every step between segment switches, with the
  // piece's midpoint and end states propagated exactly from the sampled start state.
  const auto& sched = traj.schedule();
  std::vector<SpectralDecomposition> spectra;
  for (const auto& seg : sched.segments()) spectra.push_back(spectral_decompose(seg.hamiltonian, tol));
  b.phi_dynamical.assign(n, 0.0);
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double t_b = traj.times()[k + 1];
    double t = traj.times()[k];
    Vector state = traj.states()[k].amplitudes();
    while (t < t_b) {
      const std::size_t seg = sched.segment_at(t);
      const double end = std::min(t_b, sched.segment_start(seg + 1));
      const double len = end - t;
      if (len <= 0.0) break;
      const HermitianOperator& hop = sched.segments()[seg].hamiltonian;
      const Vector mid = propagator(spectra[seg], 0.5 * len, sched.hbar()) * state;
      const Vector last = propagator(spectra[seg], len, sched.hbar()) * state;
      acc += len / 6.0 *
             (hop.expectation(state) + 4.0 * hop.expectation(mid) + hop.expectation(last));
      state = last;
      t = end;
    }
    b.phi_dynamical[k + 1] = -acc / sched.hbar();
  }

  // Geometric phase: finite-difference connection of chi, bridged across nodes with the
  // additivity relation applied to this module's own total phase.
  std::vector<std::optional<Vector>> chi(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!std::isnan(b.phi_total[k])) chi[k] = reference_state(traj, k);
  }
  const std::vector<bool> breaks = segment_breaks(traj);
  const std::vector<double> conn = fd_connection_series(chi, breaks, h);
  b.phi_geometric.assign(n, kNaN);
  double offset = 0.0;
  std::size_t prev_defined = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (std::isnan(conn[k])) continue;
    if (k > 0 && std::isnan(conn[k - 1])) {
      // new run after a node gap
      const double jump_total = b.phi_total[k] - b.phi_total[prev_defined];
      const double jump_dyn = b.phi_dynamical[k] - b.phi_dynamical[prev_defined];
      offset = b.phi_geometric[prev_defined] + (jump_total - jump_dyn) + conn[k];
    }
    b.phi_geometric[k] = -conn[k] + offset;
    prev_defined = k;
  }

  // Orthogonal-component phase.
  std::vector<std::optional<Vector>> orth(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Vector perp = traj.states()[k].amplitudes() - c[k] * psi0;
    const double norm = perp.norm();
    if (norm > tol.node) orth[k] = perp / norm;
  }
  b.phi_orthogonal = fd_connection_series(orth, breaks, h);

  // Geometry.
  b.step_lengths.resize(n - 1);
  b.gamma.assign(n - 1, kNaN);
  b.kernel.assign(n - 1, kNaN);
  b.circuit_cumulative.assign(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double ds = gram_angle(traj.states()[k].amplitudes(), traj.states()[k + 1].amplitudes());
    const double ds0 = b.s0[k + 1] - b.s0[k];
    b.step_lengths[k] = ds;
    b.circuit_cumulative[k + 1] = b.circuit_cumulative[k] + ds - std::abs(ds0);
    if (!(ds > tol.turn)) continue;
    const double gamma = std::sqrt(std::max(0.0, 1.0 - (ds0 / ds) * (ds0 / ds)));
    b.gamma[k] = gamma;
    if (std::isnan(b.phi_total[k]) || std::isnan(b.phi_total[k + 1]) || std::abs(ds0) <= tol.turn ||
        gamma * gamma <= tol.turn) {
      continue;
    }
    const double d_phi = b.phi_total[k + 1] - b.phi_total[k];
    b.kernel[k] = std::sin(0.5 * (b.s0[k] + b.s0[k + 1])) / gamma * d_phi / ds0;
  }
  return b;
}

namespace {

OracleReport compare_series(const std::string& quantity, const std::vector<double>& main,
                            const std::vector<double>& oracle, const std::string& method,
                            const std::vector<bool>* skip = nullptr) {
  if (main.size() != oracle.size()) {
    throw Error(ErrorCode::RangeMismatch, "oracle series length differs for " + quantity);
  }
  OracleReport r;
  r.quantity = quantity;
  r.method = method;
  double scale = 1.0;
  bool first = true;
  std::size_t skipped = 0;
  for (std::size_t k = 0; k < main.size(); ++k) {
    if (std::isnan(main[k]) || std::isnan(oracle[k])) continue;
    if (skip && (*skip)[k]) {
      ++skipped;
      continue;
    }
    scale = std::max(scale, std::abs(oracle[k]));
    const double d = std::abs(main[k] - oracle[k]);
    if (first || d > r.abs_diff) {
      r.main_value = main[k];
      r.oracle_value = oracle[k];
      r.abs_diff = d;
      first = false;
    }
  }
  r.rel_diff = r.abs_diff / scale;
  if (skip) r.method += " (" + std::to_string(skipped) + " ill-conditioned steps skipped)";
  return r;
}

}  // namespace

std::vector<OracleReport> compare_with_bruteforce(const PhaseLedger& ledger,
                                                  const GeometryReport& geometry,
                                                  const BruteForceLedger& brute) {
  // Near-geodesic steps (gamma -> 0, always the case as t -> 0) make gamma and K
  // roundoff-dominated in any double-precision evaluation; compare the rest.
  std::vector<bool> ill(brute.gamma.size());
  for (std::size_t k = 0; k < ill.size(); ++k) {
    ill[k] = !(brute.gamma[k] >= kConditionedGamma);
  }
  std::vector<OracleReport> out;
  out.push_back(compare_series("S0", ledger.s0, brute.s0, "Gram-determinant angle"));
  out.push_back(compare_series("Phi", ledger.phi_total, brute.phi_total, "unwrapped arg c"));
  out.push_back(compare_series("PhiD", ledger.phi_dynamical, brute.phi_dynamical,
                               "Simpson quadrature of <H> with exact midpoint states"));
  out.push_back(compare_series("PhiG", ledger.phi_geometric, brute.phi_geometric,
                               "finite-difference connection of chi"));
  out.push_back(compare_series("PhiBar", ledger.phi_orthogonal, brute.phi_orthogonal,
                               "finite-difference connection of the orthogonal component"));
  out.push_back(compare_series("f_g", ledger.gpf, brute.gpf, "1 - |c|^2"));
  out.push_back(compare_series("dS", geometry.step_lengths.overlap_form, brute.step_lengths,
                               "Gram-determinant step angle"));
  out.push_back(compare_series("circuit", geometry.circuit.cumulative, brute.circuit_cumulative,
                               "cumulative dS - |dS0| from Gram angles"));
  out.push_back(compare_series("gamma", geometry.kernel.gamma, brute.gamma,
                               "sqrt(1 - (dS0/dS)^2) from Gram angles", &ill));
  out.push_back(compare_series("K", geometry.kernel.kernel, brute.kernel,
                               "kernel from Gram angles and unwrapped arg c", &ill));
  return out;
}

}  // namespace phasefrac
