#include "phasefrac/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "phasefrac/io.hpp"

namespace phasefrac {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NodeEncountered:
      return 1;
    case ErrorCode::NonHermitianInput:
    case ErrorCode::DimensionOutOfRange:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::UnnormalizedState:
    case ErrorCode::StepCountTooSmall:
    case ErrorCode::ParamOutOfRange:
    case ErrorCode::InvalidArgument:
    case ErrorCode::ParseError:
    case ErrorCode::TimeDependentScheduleUnsupported:
      return 2;
    case ErrorCode::NumericalFailure:
    case ErrorCode::PhaseResolutionExceeded:
    case ErrorCode::InsufficientSamples:
    case ErrorCode::RangeMismatch:
    case ErrorCode::TanDivergence:
      return 3;
  }
  return 3;
}

namespace {

constexpr double kDefaultTol = 1e-5;

struct Common {
  std::string scenario;
  int steps = 0;
  std::string out;
  std::string format = "csv";
  bool strict_nodes = false;
};

void add_common(CLI::App* cmd, Common& c, bool with_format) {
  cmd->add_option("--scenario", c.scenario, "scenario file path or builtin:NAME")->required();
  cmd->add_option("--steps", c.steps, "time steps (default: the scenario's own, usually 4096)");
  cmd->add_option("--out", c.out, "output file (default: standard output)");
  if (with_format) {
    cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  }
  cmd->add_flag("--strict-nodes", c.strict_nodes, "fail at the first node instead of bridging it");
}

void emit(const Common& c, const std::string& content, std::ostream& out) {
  if (c.out.empty()) {
    out << content;
  } else {
    write_file_atomic(c.out, content);
  }
}

std::string render(const Common& c, const Table& table, const nlohmann::json& meta) {
  if (c.format == "json") return table_to_json(table, meta).dump() + "\n";
  return to_csv(table);
}

NodePolicy policy_of(const Common& c) {
  return c.strict_nodes ? NodePolicy::Strict : NodePolicy::Continue;
}

double resolve_tolerance(const CLI::Option* tol_opt, double tol_flag) {
  if (tol_opt->count() > 0) return tol_flag;
  if (const char* env = std::getenv("PHASEFRAC_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidArgument, "PHASEFRAC_TOL must be a positive number");
    }
    return v;
  }
  return kDefaultTol;
}

std::string cell(double v) {
  if (std::isnan(v)) return "-";
  std::ostringstream s;
  s << std::scientific << std::setprecision(3) << v;
  return s.str();
}

void print_report(const VerifyReport& r, std::ostream& out) {
  out << r.scenario << " (" << r.steps << " steps): " << (r.passed() ? "PASS" : "FAIL") << '\n';
  for (const auto& c : r.checks) {
    out << "  " << std::left << std::setw(28) << c.name << std::right << std::setw(11) << cell(c.value)
        << "  <= " << std::setw(9) << cell(c.limit) << "  "
        << (!c.applicable ? "n/a " : c.pass ? "ok  " : "FAIL");
    if (!c.detail.empty()) out << "  " << c.detail;
    out << '\n';
  }
}

struct Outcome {
  std::string name;
  std::optional<VerifyReport> report;
  int code = 0;
  std::string message;
};

Outcome run_one(const Scenario& s, const VerifyOptions& opts) {
  Outcome o;
  o.name = s.name;
  try {
    o.report = verify_scenario(s, opts);
    o.code = o.report->passed() ? 0 : 1;
  } catch (const Error& e) {
    o.code = exit_code_for(e.code());
    o.message = e.what();
  }
  return o;
}

int cmd_verify(const std::string& scenario, bool all, VerifyOptions opts, const std::string& out_dir,
               std::ostream& out, std::ostream& err) {
  std::vector<Scenario> scenarios;
  if (all) {
    scenarios = catalog();
  } else {
    scenarios.push_back(resolve_scenario(scenario));
  }

  std::vector<std::future<Outcome>> jobs;
  for (const auto& s : scenarios) {
    jobs.push_back(std::async(std::launch::async, [&s, opts] { return run_one(s, opts); }));
  }
  std::vector<Outcome> outcomes;
  for (auto& j : jobs) outcomes.push_back(j.get());
  std::sort(outcomes.begin(), outcomes.end(),
            [](const Outcome& a, const Outcome& b) { return a.name < b.name; });

  int worst = 0;
  std::size_t passed = 0;
  for (const auto& o : outcomes) {
    if (o.report) {
      print_report(*o.report, out);
      if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        write_file_atomic(std::filesystem::path(out_dir) / (o.name + ".verify.json"),
                          verify_json(*o.report).dump(2) + "\n");
      }
      if (!o.report->passed()) {
        err << "invariant violated: " << o.name << ": " << o.report->failures() << '\n';
      }
    } else {
      out << o.name << ": ERROR " << o.message << '\n';
      err << "error: " << o.name << ": " << o.message << '\n';
    }
    if (o.code == 0) ++passed;
    worst = std::max(worst, o.code);
  }
  out << "verified " << passed << "/" << outcomes.size() << " scenarios at tol " << cell(opts.tol)
      << (opts.deep ? " with oracle cross-checks" : "") << '\n';
  return worst;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Phase decomposition of pure-state unitary evolution"};
  app.footer(
      "Units: hbar defaults to 1 (scenario key \"hbar\"); all angles and phases are in radians.\n"
      "Scenarios: builtin:NAME (see 'scenario list') or a JSON file with \"schema\": 1.\n"
      "PHASEFRAC_TOL overrides the default verify tolerance (1e-5).\n"
      "Exit: 0 ok, 1 invariant violated, 2 parse/validation error, 3 numerical failure.");
  app.require_subcommand(1);

  Common evolve_opts, phases_opts, geometry_opts, qsl_opts;
  auto* evolve = app.add_subcommand("evolve", "trajectory table: amplitudes, overlap, total phase");
  add_common(evolve, evolve_opts, true);
  auto* phases = app.add_subcommand("phases", "phase ledger with fractional-law residuals");
  add_common(phases, phases_opts, true);
  auto* geometry = app.add_subcommand("geometry", "Fubini-Study step lengths, circuitousness, kernel");
  add_common(geometry, geometry_opts, true);
  auto* qsl = app.add_subcommand("qsl", "speed-limit report (JSON)");
  add_common(qsl, qsl_opts, false);

  auto* verify = app.add_subcommand("verify", "run the invariant battery");
  std::string verify_scenario_spec;
  bool verify_all = false;
  double tol_flag = kDefaultTol;
  VerifyOptions vopts;
  std::string verify_out;
  auto* sc_opt = verify->add_option("--scenario", verify_scenario_spec, "scenario file or builtin:NAME");
  auto* all_opt = verify->add_flag("--all", verify_all, "every built-in scenario, run concurrently");
  sc_opt->excludes(all_opt);
  auto* tol_opt = verify->add_option("--tol", tol_flag, "residual tolerance (default 1e-5)")
                      ->check(CLI::PositiveNumber);
  verify->add_option("--steps", vopts.steps, "time steps (default: each scenario's own)");
  verify->add_flag("--deep", vopts.deep, "add cross-checks against the brute-force recomputation");
  verify->add_flag("--strict-nodes", vopts.strict_nodes, "treat a node on the path as a failure");
  verify->add_option("--out", verify_out, "directory for per-scenario JSON reports");

  auto* scenario_cmd = app.add_subcommand("scenario", "inspect scenarios");
  scenario_cmd->require_subcommand(1);
  auto* list = scenario_cmd->add_subcommand("list", "built-in scenario names");
  std::string show_spec;
  auto* show = scenario_cmd->add_subcommand("show", "print a scenario as a schema-1 document");
  show->add_option("scenario", show_spec, "builtin:NAME, NAME or file path")->required();

  std::vector<std::string> argv_store{"phasefrac"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    auto table_command = [&](const Common& c, const char* name, Table (*build)(const Analysis&)) {
      const Scenario s = resolve_scenario(c.scenario);
      const Analysis a = analyze(s, c.steps, policy_of(c));
      emit(c, render(c, build(a), output_metadata(s, a, name)), out);
      return 0;
    };
    if (*evolve) return table_command(evolve_opts, "evolve", evolve_table);
    if (*phases) return table_command(phases_opts, "phases", phases_table);
    if (*geometry) return table_command(geometry_opts, "geometry", geometry_table);
    if (*qsl) {
      const Scenario s = resolve_scenario(qsl_opts.scenario);
      const Analysis a = analyze(s, qsl_opts.steps, policy_of(qsl_opts));
      if (!a.speed_limits) {
        throw Error(ErrorCode::TimeDependentScheduleUnsupported,
                    "speed limits need a time-independent Hamiltonian");
      }
      nlohmann::json doc = speed_limit_json(*a.speed_limits);
      doc["meta"] = output_metadata(s, a, "qsl");
      emit(qsl_opts, doc.dump(2) + "\n", out);
      return 0;
    }
    if (*verify) {
      if (!verify_all && verify_scenario_spec.empty()) {
        err << "error: verify needs --scenario or --all\n";
        return 2;
      }
      vopts.tol = resolve_tolerance(tol_opt, tol_flag);
      return cmd_verify(verify_scenario_spec, verify_all, vopts, verify_out, out, err);
    }
    if (*list) {
      for (const auto& s : catalog()) {
        out << std::left << std::setw(22) << s.name << s.description << '\n';
      }
      return 0;
    }
    if (*show) {
      const bool builtin_name = show_spec.find(':') == std::string::npos &&
                                !std::filesystem::exists(show_spec);
      const Scenario s = resolve_scenario(builtin_name ? "builtin:" + show_spec : show_spec);
      out << scenario_to_json(s).dump(2) << '\n';
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    if (e.code() == ErrorCode::PhaseResolutionExceeded) {
      err << "advice: the overlap turns too far between samples; rerun with a larger --steps\n";
    }
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}

}  // namespace phasefrac
