#include "phasefrac/io.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "phasefrac/error.hpp"

namespace phasefrac {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void parse_fail(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::ParseError, "field '" + field + "': " + what);
}

// Re-raises a validation error with the offending field named, keeping its code.
[[noreturn]] void rethrow_for(const std::string& field, const Error& e) {
  std::string msg = e.what();
  const std::string prefix = std::string(error_code_name(e.code())) + ": ";
  if (msg.rfind(prefix, 0) == 0) msg.erase(0, prefix.size());
  throw Error(e.code(), "field '" + field + "': " + msg);
}

double read_number(const json& v, const std::string& field) {
  if (!v.is_number()) parse_fail(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) parse_fail(field, "must be finite");
  return x;
}

Complex read_complex(const json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 2) parse_fail(field, "expected a [re, im] pair");
  return {read_number(v[0], field + "[0]"), read_number(v[1], field + "[1]")};
}

Matrix read_matrix(const json& v, int dim, const std::string& field) {
  if (!v.is_array() || v.size() != static_cast<std::size_t>(dim)) {
    parse_fail(field, "expected " + std::to_string(dim) + " rows");
  }
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const std::string row = field + "[" + std::to_string(i) + "]";
    if (!v[i].is_array() || v[i].size() != static_cast<std::size_t>(dim)) {
      parse_fail(row, "expected " + std::to_string(dim) + " entries");
    }
    for (int j = 0; j < dim; ++j) m(i, j) = read_complex(v[i][j], row + "[" + std::to_string(j) + "]");
  }
  return m;
}

HermitianOperator read_hamiltonian(const json& v, int dim, const std::string& field) {
  Matrix m = read_matrix(v, dim, field);
  try {
    return HermitianOperator(std::move(m));
  } catch (const Error& e) {
    rethrow_for(field, e);
  }
}

double read_positive(const json& v, const std::string& field) {
  const double x = read_number(v, field);
  if (!(x > 0.0)) parse_fail(field, "must be positive");
  return x;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) {
      parse_fail(where.empty() ? key : where + "." + key, "unknown key");
    }
  }
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double step_value(const std::vector<double>& per_step, std::size_t row) {
  return row == 0 ? kNaN : per_step[row - 1];
}

}  // namespace

Scenario parse_scenario_json(std::string_view text, const std::string& default_name) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) parse_fail("<root>", "expected an object");
  reject_unknown(doc,
                 {"schema", "name", "hbar", "dimension", "hamiltonian", "segments", "initial_state",
                  "t_final", "steps"},
                 "");

  if (!doc.contains("schema")) parse_fail("schema", "missing (expected 1)");
  if (!doc["schema"].is_number_integer() || doc["schema"].get<int>() != kScenarioSchema) {
    parse_fail("schema", "unsupported version (expected 1)");
  }

  std::string name = default_name;
  if (doc.contains("name")) {
    if (!doc["name"].is_string() || doc["name"].get<std::string>().empty()) {
      parse_fail("name", "expected a non-empty string");
    }
    name = doc["name"].get<std::string>();
  }

  const double hbar = doc.contains("hbar") ? read_positive(doc["hbar"], "hbar") : 1.0;

  if (!doc.contains("dimension")) parse_fail("dimension", "missing");
  if (!doc["dimension"].is_number_integer()) parse_fail("dimension", "expected an integer");
  const int dim = doc["dimension"].get<int>();
  if (dim < 2 || dim > 64) {
    throw Error(ErrorCode::DimensionOutOfRange, "field 'dimension': must lie in [2, 64]");
  }

  const bool has_h = doc.contains("hamiltonian");
  const bool has_segments = doc.contains("segments");
  if (has_h == has_segments) {
    parse_fail(has_h ? "segments" : "hamiltonian",
               "exactly one of 'hamiltonian' and 'segments' is required");
  }

  std::vector<ScheduleSegment> segments;
  if (has_h) {
    if (!doc.contains("t_final")) parse_fail("t_final", "required with 'hamiltonian'");
    const double t_final = read_positive(doc["t_final"], "t_final");
    segments.push_back({read_hamiltonian(doc["hamiltonian"], dim, "hamiltonian"), t_final});
  } else {
    if (doc.contains("t_final")) parse_fail("t_final", "not allowed with 'segments' (the durations set it)");
    const json& segs = doc["segments"];
    if (!segs.is_array() || segs.empty()) parse_fail("segments", "expected a non-empty array");
    for (std::size_t i = 0; i < segs.size(); ++i) {
      const std::string field = "segments[" + std::to_string(i) + "]";
      if (!segs[i].is_object()) parse_fail(field, "expected an object");
      reject_unknown(segs[i], {"hamiltonian", "duration"}, field);
      if (!segs[i].contains("hamiltonian")) parse_fail(field + ".hamiltonian", "missing");
      if (!segs[i].contains("duration")) parse_fail(field + ".duration", "missing");
      segments.push_back({read_hamiltonian(segs[i]["hamiltonian"], dim, field + ".hamiltonian"),
                          read_positive(segs[i]["duration"], field + ".duration")});
    }
  }

  if (!doc.contains("initial_state")) parse_fail("initial_state", "missing");
  const json& init = doc["initial_state"];
  if (!init.is_array() || init.size() != static_cast<std::size_t>(dim)) {
    parse_fail("initial_state", "expected " + std::to_string(dim) + " [re, im] pairs");
  }
  Vector amps(dim);
  for (int i = 0; i < dim; ++i) {
    amps[i] = read_complex(init[i], "initial_state[" + std::to_string(i) + "]");
  }
  std::optional<QuantumState> psi0;
  try {
    psi0.emplace(std::move(amps));
  } catch (const Error& e) {
    rethrow_for("initial_state", e);
  }

  int steps = 4096;
  if (doc.contains("steps")) {
    if (!doc["steps"].is_number_integer()) parse_fail("steps", "expected an integer");
    steps = doc["steps"].get<int>();
    if (steps < kMinSteps) {
      throw Error(ErrorCode::StepCountTooSmall,
                  "field 'steps': need at least " + std::to_string(kMinSteps));
    }
  }

  HamiltonianSchedule schedule(std::move(segments), hbar);
  const double t_final = schedule.total_duration();
  return Scenario{std::move(name), std::move(schedule), std::move(*psi0), t_final, steps,
                  std::nullopt, "loaded from a scenario file"};
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read scenario file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_json(buf.str(), path.stem().string());
}

Scenario resolve_scenario(std::string_view spec) {
  constexpr std::string_view prefix = "builtin:";
  if (spec.substr(0, prefix.size()) == prefix) return builtin_scenario(spec.substr(prefix.size()));
  return load_scenario_file(std::filesystem::path(std::string(spec)));
}

json scenario_to_json(const Scenario& s) {
  json doc;
  doc["schema"] = kScenarioSchema;
  doc["name"] = s.name;
  doc["hbar"] = s.schedule.hbar();
  doc["dimension"] = s.schedule.dim();
  const auto& segs = s.schedule.segments();
  if (segs.size() == 1) {
    doc["hamiltonian"] = matrix_json(segs.front().hamiltonian.matrix());
    doc["t_final"] = segs.front().duration;
  } else {
    json arr = json::array();
    for (const auto& seg : segs) {
      arr.push_back({{"hamiltonian", matrix_json(seg.hamiltonian.matrix())}, {"duration", seg.duration}});
    }
    doc["segments"] = std::move(arr);
  }
  json init = json::array();
  for (Eigen::Index i = 0; i < s.psi0.dim(); ++i) init.push_back(complex_json(s.psi0[i]));
  doc["initial_state"] = std::move(init);
  doc["steps"] = s.default_steps;
  return doc;
}

std::string scenario_hash(const Scenario& scenario) {
  const std::string canonical = scenario_to_json(scenario).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      if (!std::isnan(row[i])) out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

json table_to_json(const Table& table, const json& meta) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    json r = json::array();
    for (double x : row) r.push_back(number_or_null(x));
    rows.push_back(std::move(r));
  }
  return {{"meta", meta}, {"columns", table.columns}, {"rows", std::move(rows)}};
}

Table table_from_json(const json& doc) {
  Table t;
  try {
    t.columns = doc.at("columns").get<std::vector<std::string>>();
    for (const auto& r : doc.at("rows")) {
      std::vector<double> row;
      for (const auto& x : r) row.push_back(x.is_null() ? kNaN : x.get<double>());
      if (row.size() != t.columns.size()) parse_fail("rows", "row width differs from columns");
      t.rows.push_back(std::move(row));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("table document: ") + e.what());
  }
  return t;
}

json output_metadata(const Scenario& scenario, const Analysis& analysis, std::string_view command) {
  return {{"tool", kToolName},
          {"version", kToolVersion},
          {"command", std::string(command)},
          {"scenario", scenario.name},
          {"scenario_hash", scenario_hash(scenario)},
          {"steps", analysis.trajectory.steps()},
          {"hbar", analysis.trajectory.hbar()},
          {"t_final", analysis.trajectory.duration()},
          {"nodes", analysis.angles.node_count()}};
}

Table evolve_table(const Analysis& a) {
  const Trajectory& traj = a.trajectory;
  Table t;
  t.columns.push_back("t");
  for (Eigen::Index i = 0; i < traj.schedule().dim(); ++i) {
    t.columns.push_back("re_" + std::to_string(i));
    t.columns.push_back("im_" + std::to_string(i));
  }
  for (const char* c : {"abs_c", "arg_c", "phi_total", "node"}) t.columns.emplace_back(c);
  for (std::size_t k = 0; k < traj.samples(); ++k) {
    std::vector<double> row{traj.times()[k]};
    const Vector& psi = traj.states()[k].amplitudes();
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
      row.push_back(psi[i].real());
      row.push_back(psi[i].imag());
    }
    const Complex c = traj.overlaps()[k];
    const bool node = a.angles.node_flags[k];
    row.push_back(std::abs(c));
    row.push_back(node ? kNaN : std::arg(c));
    row.push_back(a.angles.phi_total[k]);
    row.push_back(node ? 1.0 : 0.0);
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table phases_table(const Analysis& a) {
  const PhaseLedger& l = a.ledger;
  Table t;
  t.columns = {"t", "S0", "Phi", "PhiD", "PhiG", "PhiBar", "f_g", "eq9_res_d", "eq9_res_g"};
  for (std::size_t k = 0; k < l.times.size(); ++k) {
    t.rows.push_back({l.times[k], l.s0[k], l.phi_total[k], l.phi_dynamical[k], l.phi_geometric[k],
                      l.phi_orthogonal[k], l.gpf[k], step_value(l.fractional_law.residual_d, k),
                      step_value(l.fractional_law.residual_g, k)});
  }
  return t;
}

Table geometry_table(const Analysis& a) {
  const GeometryReport& g = a.geometry;
  Table t;
  t.columns = {"t", "dS", "dS0", "circuit", "gamma", "K", "S_cum"};
  for (std::size_t k = 0; k < g.times.size(); ++k) {
    t.rows.push_back({g.times[k], step_value(g.step_lengths.overlap_form, k), step_value(g.ds0, k),
                      g.circuit.cumulative[k], step_value(g.kernel.gamma, k),
                      step_value(g.kernel.kernel, k), g.cumulative_length[k]});
  }
  return t;
}

json speed_limit_json(const SpeedLimitReport& r) {
  return {{"T", number_or_null(r.T)},
          {"mt_bound", number_or_null(r.mt_bound)},
          {"mt_saturation", number_or_null(r.mt_saturation)},
          {"f_bar", number_or_null(r.f_bar)},
          {"delta_h", number_or_null(r.delta_h)},
          {"phi_g_rot", number_or_null(r.phi_g_rot)},
          {"phi_g_lab", number_or_null(r.phi_g_lab)},
          {"geometric_bound_rot", number_or_null(r.geometric_bound_rot)},
          {"geometric_bound_lab", number_or_null(r.geometric_bound_lab)},
          {"geometric_saturation_rot", number_or_null(r.geometric_saturation_rot)},
          {"geometric_saturation_lab", number_or_null(r.geometric_saturation_lab)},
          {"sign_conflict_steps", r.sign_conflict_steps},
          {"frame_excess_steps", r.frame_excess_steps},
          {"rotating_hypotheses_hold", r.rotating_hypotheses_hold()},
          {"notes", r.notes}};
}

json verify_json(const VerifyReport& report) {
  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"value", number_or_null(c.value)},
                      {"limit", c.limit},
                      {"applicable", c.applicable},
                      {"pass", c.pass},
                      {"detail", c.detail}});
  }
  return {{"tool", kToolName},   {"version", kToolVersion}, {"scenario", report.scenario},
          {"steps", report.steps}, {"passed", report.passed()}, {"checks", std::move(checks)}};
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  const fs::path tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error(ErrorCode::InvalidArgument, "write failed for '" + path.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::InvalidArgument, "cannot move output into '" + path.string() + "'");
  }
}

}  // namespace phasefrac
