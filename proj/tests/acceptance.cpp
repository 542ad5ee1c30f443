// Acceptance battery: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "phasefrac/cli.hpp"
#include "support.hpp"

using namespace phasefrac;
using testing::pi;

namespace {

struct Verdict {
  bool pass = true;
  std::string summary;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool is_precession(const std::string& name) { return name.rfind("precession-", 0) == 0; }

double eq9_max(const Analysis& a) {
  return std::max(a.ledger.fractional_law.max_abs_d, a.ledger.fractional_law.max_abs_g);
}

// 1. lemma and theorem reconstruction
Verdict lemma_theorem() {
  const auto t0 = std::chrono::steady_clock::now();
  double lemma = 0.0, theorem = 0.0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const int dim = 2 + static_cast<int>(seed % 7);
    const QuantumState psi = random_state(dim, 5000 + seed);
    const HermitianOperator h = random_hermitian(dim, 7000 + seed);
    const QuantumState u_psi(Vector(propagator(h, 1.3, 1.0) * psi.amplitudes()));
    const auto d = decompose_unitary_action(psi, u_psi);
    Vector rebuilt = d.mean * psi.amplitudes();
    if (d.orthogonal) rebuilt += d.delta * d.orthogonal->amplitudes();
    lemma = std::max(lemma, max_abs(Vector(rebuilt - u_psi.amplitudes())));

    Trajectory traj = evolve(psi, HamiltonianSchedule::constant(h, 1.3), 64);
    // near-nodes turn the overlap quickly; refine until the unwrapping resolves them
    std::optional<AngleTrack> track;
    while (!track) {
      try {
        track = angle_track(traj);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::PhaseResolutionExceeded || traj.steps() >= 65536) throw;
        traj = refine(traj, 4);
      }
    }
    const AngleTrack& angles = *track;
    const OrthogonalTrack orth = orthogonal_track(traj);
    for (std::size_t k = 0; k < traj.samples(); ++k) {
      theorem = std::max(theorem, theorem_reconstruction_residual(traj, angles, orth, k));
    }
  }
  const double elapsed = seconds_since(t0);
  return {lemma <= 1e-10 && theorem <= 1e-10 && elapsed < 1.0,
          fmt("200 pairs, dims 2-8: lemma %.2e, theorem %.2e (<= 1e-10), %.3f s", lemma, theorem,
              elapsed)};
}

// 2. central law residuals and convergence order
Verdict central_law() {
  double worst = 0.0, min_order = 1e300;
  std::size_t vacuous = 0, measured = 0;
  std::string worst_order_name;
  for (const auto& s : catalog()) {
    const double r1 = eq9_max(analyze(s, 4096));
    const double r2 = eq9_max(analyze(s, 8192));
    const double r4 = eq9_max(analyze(s, 16384));
    worst = std::max(worst, r1);
    // residuals already at roundoff carry no convergence information
    if (r1 <= 1e-13) {
      ++vacuous;
      continue;
    }
    ++measured;
    const double order = std::min(std::log2(r1 / r2), std::log2(r1 / r4) / 2.0);
    if (order < min_order) {
      min_order = order;
      worst_order_name = s.name;
    }
  }
  return {worst <= 5e-6 && min_order >= 1.9,
          fmt("max residual %.2e (<= 5e-6); min order %.2f (>= 1.9, %s) on %zu scenarios, "
              "%zu at roundoff",
              worst, min_order, worst_order_name.c_str(), measured, vacuous)};
}

// 3. fraction ratio
Verdict gpf_ratio() {
  double worst = 0.0, worst_skip_rate = 0.0, worst_degenerate_dg = 0.0;
  std::size_t checked = 0, skipped = 0, identically_degenerate = 0;
  bool pass = true;
  for (const auto& s : catalog()) {
    const Analysis a = analyze(s);
    const auto& g = a.ledger.gpf_check;
    worst = std::max(worst, g.max_deviation);
    checked += g.checked;
    skipped += g.skipped_degenerate;
    if (!is_precession(s.name)) continue;
    const double rate = static_cast<double>(g.skipped_degenerate) / static_cast<double>(a.trajectory.steps());
    if (g.checked > 0) {
      worst_skip_rate = std::max(worst_skip_rate, rate);
      continue;
    }
    // On the equator Phi and PhiBar are piecewise constant, so the ratio is 0/0 on every
    // step. The law then reads dPhi_G = 0, which is checked directly.
    ++identically_degenerate;
    const auto& pg = a.ledger.phi_geometric;
    for (std::size_t k = 0; k + 1 < pg.size(); ++k) {
      if (std::isnan(pg[k]) || std::isnan(pg[k + 1])) continue;
      worst_degenerate_dg = std::max(worst_degenerate_dg, std::abs(pg[k + 1] - pg[k]));
    }
  }
  pass = worst <= 1e-5 && worst_skip_rate < 0.01 && worst_degenerate_dg <= 1e-9;
  return {pass, fmt("max deviation %.2e (<= 1e-5) over %zu steps, %zu skipped; precession skip "
                    "rate %.2f%% (< 1%%); %zu equatorial scenarios have a vanishing denominator "
                    "everywhere, max |dPhi_G| there %.1e",
                    worst, checked, skipped, 100.0 * worst_skip_rate, identically_degenerate,
                    worst_degenerate_dg)};
}

// 4. closed-form cyclic phases
Verdict cyclic_phases() {
  const Analysis a = analyze(builtin_scenario("precession-th60"));
  const double e_phi = std::abs(a.ledger.phi_total.back() + pi);
  const double e_d = std::abs(a.ledger.phi_dynamical.back() + pi / 2);
  const double e_g = std::abs(a.ledger.phi_geometric.back() + pi / 2);
  return {std::max({e_phi, e_d, e_g}) <= 1e-4,
          fmt("theta = pi/3 errors: Phi %.2e, Phi_D %.2e, Phi_G %.2e (<= 1e-4)", e_phi, e_d, e_g)};
}

// 5. path length
Verdict path_length() {
  const Analysis a = analyze(builtin_scenario("precession-th60"));
  const double err = std::abs(a.geometry.total_length - 2 * pi * std::sin(pi / 3));
  double cross = 0.0, stationary_len = 0.0;
  std::size_t stationary = 0;
  for (const auto& s : catalog()) {
    if (!s.schedule.time_independent()) continue;
    const Trajectory traj = evolve(s.psi0, s.schedule, s.default_steps);
    const PathLength p = total_length(traj);
    // a stationary ray has zero length both ways; the ratio of roundoff carries nothing
    if (p.variance_form <= 1e-9) {
      ++stationary;
      stationary_len = std::max(stationary_len, p.overlap_form);
      continue;
    }
    cross = std::max(cross, p.relative_difference);
  }
  return {err <= 1e-4 && cross <= 1e-6 && stationary_len <= 1e-9,
          fmt("theta = pi/3 length error %.2e (<= 1e-4); overlap vs variance form %.2e (<= 1e-6 rel); "
              "%zu stationary, length %.1e",
              err, cross, stationary, stationary_len)};
}

// 6. metric identities
Verdict metric() {
  double rot = 0.0, forms = 0.0, min_order = 1e300;
  for (const auto& s : catalog()) {
    const Analysis a = analyze(s);
    forms = std::max(forms, a.geometry.metric.max_form_disagreement);
    if (is_precession(s.name)) rot = std::max(rot, a.geometry.metric.max_rotating);
    if (s.name.rfind("random-", 0) == 0) {
      const double r1 = a.geometry.metric.max_rotating;
      const double r2 = analyze(s, 8192).geometry.metric.max_rotating;
      min_order = std::min(min_order, std::log2(r1 / r2));
    }
  }
  return {rot <= 1e-8 && min_order >= 2.0 && forms <= 1e-12,
          fmt("precession rotating residual %.2e (<= 1e-8); random-system order %.2f (>= 2); "
              "forms differ by %.2e (<= 1e-12)",
              rot, min_order, forms)};
}

// 7. speed limits
Verdict speed_limits() {
  double worst_slack = 1e300;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Scenario s = random_scenario(2 + static_cast<int>(seed % 7), 9000 + seed);
    const Analysis a = analyze(s, 1024);
    worst_slack = std::min(worst_slack, a.speed_limits->T - a.speed_limits->mt_bound);
  }
  const auto half = *analyze(builtin_scenario("precession-th90-half")).speed_limits;
  const double sat = std::abs(half.mt_saturation - 1.0);
  bool cyclic_ok = true;
  std::string cyclic;
  for (const char* name : {"precession-th30", "precession-th60"}) {
    const auto r = *analyze(builtin_scenario(name)).speed_limits;
    cyclic_ok = cyclic_ok && r.mt_bound == 0.0 && r.geometric_bound_rot > 0.0 &&
                r.T >= r.geometric_bound_rot - 1e-9 && r.sign_conflict_steps == 0;
    cyclic += fmt(" %s bound_rot %.4f, conflicts %zu;", name, r.geometric_bound_rot,
                  r.sign_conflict_steps);
  }
  return {worst_slack >= -1e-9 && sat <= 1e-6 && cyclic_ok,
          fmt("min MT slack %.3f over 100 systems; half-period saturation off by %.1e;", worst_slack,
              sat) + cyclic};
}

// 8. gauge covariance
Verdict gauge() {
  const double c = 0.7321;
  double invariant = 0.0, shift = 0.0;
  for (const auto& s : catalog()) {
    const Analysis a = analyze(s);
    const Analysis b = analyze(testing::shifted(s, c));
    const auto& la = a.ledger;
    const auto& lb = b.ledger;
    const double hbar = s.schedule.hbar();
    for (std::size_t k = 0; k < la.times.size(); ++k) {
      if (std::isnan(la.phi_total[k])) continue;
      const double expected = -c * la.times[k] / hbar;
      invariant = std::max({invariant, std::abs(lb.s0[k] - la.s0[k]),
                            std::abs(lb.phi_geometric[k] - la.phi_geometric[k])});
      shift = std::max({shift, std::abs(lb.phi_total[k] - la.phi_total[k] - expected),
                        std::abs(lb.phi_dynamical[k] - la.phi_dynamical[k] - expected)});
    }
  }
  return {invariant <= 1e-8 && shift <= 1e-8,
          fmt("c = 0.7321 on the catalog: S0/Phi_G change %.2e, Phi/Phi_D shift error %.2e (<= 1e-8)",
              invariant, shift)};
}

// 9. oracle agreement
Verdict oracle() {
  double worst = 0.0;
  std::string where;
  for (int steps : {4096, 8192}) {
    for (const auto& s : catalog()) {
      const Analysis a = analyze(s, steps);
      for (const auto& r : compare_with_bruteforce(a.ledger, a.geometry,
                                                   recompute_ledger_bruteforce(a.trajectory))) {
        if (r.rel_diff > worst) {
          worst = r.rel_diff;
          where = s.name + "/" + r.quantity + " at " + std::to_string(steps) + " steps";
        }
      }
    }
  }
  return {worst <= 1e-4, fmt("catalog at 4096 and 8192 steps: max relative disagreement %.2e (<= 1e-4), %s",
                             worst, where.c_str())};
}

// 10. CLI gate
Verdict cli_gate() {
  auto run = [](std::vector<std::string> args, std::string& out) {
    std::ostringstream o, e;
    const int code = run_cli(args, o, e);
    out = o.str();
    return code;
  };
  std::string a, b, pa, pb;
  const int code = run({"verify", "--all"}, a);
  run({"verify", "--all"}, b);
  run({"phases", "--scenario", "builtin:random-d8-s1", "--format", "json"}, pa);
  run({"phases", "--scenario", "builtin:random-d8-s1", "--format", "json"}, pb);
  const bool same = a == b && pa == pb;
  return {code == 0 && same,
          fmt("verify --all exit %d; reruns byte-identical: %s", code, same ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Verdict()>> criteria[] = {
      {"lemma/theorem reconstruction", lemma_theorem},
      {"fractional-contribution law", central_law},
      {"geometric phase fraction ratio", gpf_ratio},
      {"closed-form cyclic phases", cyclic_phases},
      {"path length", path_length},
      {"metric identities", metric},
      {"speed limits", speed_limits},
      {"gauge covariance", gauge},
      {"brute-force agreement", oracle},
      {"CLI gate", cli_gate},
  };
  int failures = 0;
  int index = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& [name, check] : criteria) {
    ++index;
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    if (!v.pass) ++failures;
    std::printf("[%s] %2d %-31s %s\n", v.pass ? "PASS" : "FAIL", index, name, v.summary.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed in %.1f s\n", index - failures, index, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
