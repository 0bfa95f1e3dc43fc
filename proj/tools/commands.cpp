#include "commands.hpp"

#include "edgebrane/catalog.hpp"
#include "edgebrane/errors.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#ifndef EDGEBRANE_VERSION
#define EDGEBRANE_VERSION "unknown"
#endif

namespace edgebrane::cli {

using nlohmann::json;
namespace fs = std::filesystem;

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

std::string config_digest(const json& config) {
  const std::string text = config.dump();
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr);
  std::string hex;
  char byte[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(byte, sizeof byte, "%02x", md[i]);
    hex += byte;
  }
  return hex;
}

json RunManifest::to_json() const {
  return json{{"command", command},           {"config_digest", digest},
              {"code_version", version},      {"started", started},
              {"finished", finished},         {"terminal_event", terminal_event},
              {"outputs", outputs},           {"summary", summary}};
}

namespace {

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RunManifest start_manifest(const std::string& command) {
  RunManifest m;
  m.command = command;
  m.version = EDGEBRANE_VERSION;
  m.started = timestamp();
  return m;
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError(path.string() + ": " + e.what());
  }
}

void check_schema(const json& j, const std::vector<std::string>& allowed) {
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  if (!j.contains("schema_version")) throw UsageError("missing schema_version");
  if (!j["schema_version"].is_number_integer() || j["schema_version"].get<int>() != kSchemaVersion)
    throw UsageError("unsupported schema_version (expected " + std::to_string(kSchemaVersion) + ")");
  for (const auto& [key, value] : j.items()) {
    if (key == "schema_version") continue;
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw UsageError("unknown config key '" + key + "'");
  }
}

template <class T>
T get_field(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw UsageError(std::string("config key '") + key + "' has the wrong type");
  }
}

/// Creates out_dir; refuses to touch a directory that already holds a run.
void prepare_out_dir(const fs::path& dir, bool force) {
  fs::create_directories(dir);
  const fs::path manifest = dir / "manifest.json";
  if (fs::exists(manifest) && !force) {
    std::string previous = "?";
    try {
      previous = read_json(manifest).value("config_digest", "?");
    } catch (const UsageError&) {
    }
    throw UsageError(dir.string() + " already holds a run (digest " + previous +
                     "); pass --force to overwrite");
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

void write_manifest(const fs::path& dir, RunManifest m) {
  m.finished = timestamp();
  write_text(dir / "manifest.json", m.to_json().dump(2) + "\n");
}

/// RFC 4180 quoting for cells holding commas or quotes (catalog ids do).
std::string csv_cell(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string quoted = "\"";
  for (char c : cell) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

std::string join_row(const std::vector<std::string>& cells) {
  std::string row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) row += ',';
    row += csv_cell(cells[i]);
  }
  return row + '\n';
}

}  // namespace

SimulationConfig parse_simulation_config(const json& j) {
  check_schema(j, {"initial_data", "grid_points", "courant", "duration", "constraint_tol",
                   "output_stride", "mub"});
  SimulationConfig c;
  c.initial_data = get_field<std::string>(j, "initial_data", c.initial_data);
  c.grid_points = get_field<int>(j, "grid_points", c.grid_points);
  c.courant = get_field<double>(j, "courant", c.courant);
  c.duration = get_field<double>(j, "duration", c.duration);
  c.constraint_tol = get_field<double>(j, "constraint_tol", c.constraint_tol);
  c.output_stride = get_field<int>(j, "output_stride", c.output_stride);
  if (j.contains("mub")) c.mub = get_field<double>(j, "mub", 1.0);
  try {
    validate(c);
  } catch (const InvalidParameters& e) {
    throw UsageError(e.what());
  }
  return c;
}

int cmd_verify(const VerifyOptions& opts, std::ostream& log) {
  RunManifest manifest = start_manifest("verify");
  std::vector<CatalogEntry> entries;
  try {
    const std::vector<std::string> ids = opts.entries.empty() ? catalog_names() : opts.entries;
    for (const auto& id : ids) {
      try {
        entries.push_back(entry_from_id(id));
      } catch (const std::out_of_range& e) {
        throw UsageError(id + ": " + e.what());
      } catch (const InvalidParameters& e) {
        throw UsageError(id + ": " + e.what());
      }
    }
    json request{{"command", "verify"}, {"entries", ids}, {"tolerance", opts.tolerance}};
    manifest.digest = config_digest(request);
    prepare_out_dir(opts.out_dir, opts.force);
  } catch (const UsageError& e) {
    log << "error: " << e.what() << '\n';
    return kUsage;
  }

  std::string csv = "entry,quantity,value,expected,residual,tolerance,pass\n";
  int failed = 0, total = 0;
  for (const auto& e : entries) {
    for (const auto& x : e.expected) {
      const double tol = opts.tolerance > 0.0 ? opts.tolerance : x.tolerance;
      double value = std::nan("");
      try {
        value = measure_quantity(e, x.quantity, x.value);
      } catch (const std::exception& ex) {
        log << e.id << " " << x.quantity << ": " << ex.what() << '\n';
      }
      const double residual = std::abs(value - x.value);
      const bool pass = residual <= tol;
      ++total;
      if (!pass) ++failed;
      csv += join_row({e.id, x.quantity, format_number(value), format_number(x.value),
                       format_number(residual), format_number(tol), pass ? "true" : "false"});
      log << (pass ? "pass " : "FAIL ") << e.id << " " << x.quantity
          << " residual=" << format_number(residual) << '\n';
    }
  }
  write_text(opts.out_dir / "verify.csv", csv);
  manifest.outputs = {(opts.out_dir / "verify.csv").string()};
  manifest.summary = {{"checks", total}, {"failed", failed}};
  write_manifest(opts.out_dir, manifest);
  log << (total - failed) << "/" << total << " checks passed\n";
  return failed == 0 ? kSuccess : kFailure;
}

int cmd_evolve(const EvolveOptions& opts, std::ostream& log) {
  RunManifest manifest = start_manifest("evolve");
  SimulationConfig config;
  StringState initial;
  try {
    const json j = read_json(opts.config);
    config = parse_simulation_config(j);
    try {
      initial = initial_state(config);
    } catch (const InvalidParameters& e) {
      throw UsageError(e.what());
    } catch (const std::out_of_range& e) {
      throw UsageError(e.what());
    }
    json request = j;
    request["command"] = "evolve";
    manifest.digest = config_digest(request);
    prepare_out_dir(opts.out_dir, opts.force);
  } catch (const UsageError& e) {
    log << "error: " << e.what() << '\n';
    return kUsage;
  }

  const int dim = static_cast<int>(initial.positions.rows());
  std::ostringstream snapshots, endpoints, diag;
  {
    std::vector<std::string> head{"t", "index"};
    for (int mu = 0; mu < dim; ++mu) head.push_back("x" + std::to_string(mu));
    snapshots << join_row(head);
    std::vector<std::string> ends{"t", "side"};
    for (int mu = 0; mu < dim; ++mu) ends.push_back("x" + std::to_string(mu));
    for (int mu = 0; mu < dim; ++mu) ends.push_back("u" + std::to_string(mu));
    ends.insert(ends.end(), {"proper_time", "acceleration", "angle"});
    endpoints << join_row(ends);
    diag << join_row({"t", "constraint_orthogonality", "constraint_null", "energy",
                      "angular_momentum", "acceleration_left", "acceleration_right",
                      "angle_left", "angle_right"});
  }
  int calls = 0;
  double last_written = -1.0;
  StringState last;
  auto write_state = [&](const StringState& s) {
    const Diagnostics d = diagnostics(s);
    const std::string t = format_number(s.time);
    for (int k = 0; k < s.grid_points(); ++k) {
      std::vector<std::string> row{t, std::to_string(k)};
      for (int mu = 0; mu < dim; ++mu) row.push_back(format_number(s.positions(mu, k)));
      snapshots << join_row(row);
    }
    for (int side = 0; side < 2; ++side) {
      const EndpointState& e = s.endpoints[side];
      std::vector<std::string> row{t, side == 0 ? "left" : "right"};
      for (int mu = 0; mu < dim; ++mu) row.push_back(format_number(e.position(mu)));
      for (int mu = 0; mu < dim; ++mu) row.push_back(format_number(e.four_velocity(mu)));
      row.push_back(format_number(e.proper_time));
      row.push_back(format_number(d.acceleration[side]));
      row.push_back(format_number(d.acceleration_angle[side]));
      endpoints << join_row(row);
    }
    diag << join_row({t, format_number(d.constraints.orthogonality),
                      format_number(d.constraints.null_sum), format_number(d.energy),
                      format_number(d.angular_momentum), format_number(d.acceleration[0]),
                      format_number(d.acceleration[1]), format_number(d.acceleration_angle[0]),
                      format_number(d.acceleration_angle[1])});
    last_written = s.time;
  };
  const Trajectory tr = evolve(
      initial, config,
      [&](const StringState& s) {
        if (calls++ % config.output_stride == 0) write_state(s);
        last = s;
      },
      false);
  if (last.time != last_written) write_state(last);

  const fs::path files[3] = {opts.out_dir / "snapshots.csv", opts.out_dir / "endpoints.csv",
                             opts.out_dir / "diagnostics.csv"};
  write_text(files[0], snapshots.str());
  write_text(files[1], endpoints.str());
  write_text(files[2], diag.str());
  for (const auto& f : files) manifest.outputs.push_back(f.string());
  manifest.terminal_event = to_string(tr.event);
  manifest.summary = {{"steps", tr.steps},
                      {"final_time", last.time},
                      {"endpoint_coordinate_time",
                       {last.endpoints[0].position(0), last.endpoints[1].position(0)}},
                      {"message", tr.message}};
  write_manifest(opts.out_dir, manifest);
  log << "evolve: " << tr.steps << " steps, t = " << format_number(last.time)
      << ", terminal event " << to_string(tr.event)
      << (tr.message.empty() ? "" : " (" + tr.message + ")") << '\n';
  return tr.event == TerminalEvent::constraint_blowup ? kFailure : kSuccess;
}

namespace {

struct ScanPoint {
  std::vector<double> values;
  std::string status = "ok";
};

ScanPoint hole_point(double rho, double mu0, double mub) {
  const CatalogEntry e = planar_hole(rho, false, mu0, mub);
  const BoundaryData bd = boundary_data(e.boundary(), boundary_samples(e, 0, 1).front());
  return {{rho, bd.edge_trace, edge_equation_residual(bd, mu0, mub)}};
}

ScanPoint orbit_point(double ratio, double radius) {
  const double omega = rotating_orbit_omega(ratio, 1.0, radius);
  const CatalogEntry e = helicoid(omega, radius);
  const BoundaryData bd = boundary_data(e.boundary(), boundary_samples(e, 0, 1).front());
  return {{ratio, omega, omega * radius, edge_equation_residual(bd, ratio, 1.0)}};
}

}  // namespace

int cmd_scan(const ScanOptions& opts, std::ostream& log) {
  RunManifest manifest = start_manifest("scan");
  std::string kind;
  double lo = 0, hi = 0, mu0 = 1, mub = 2, radius = 1;
  int steps = 0;
  try {
    const json j = read_json(opts.spec);
    check_schema(j, {"kind", "range", "steps", "mu0", "mub", "radius"});
    kind = get_field<std::string>(j, "kind", "");
    if (kind != "hole" && kind != "orbit") throw UsageError("scan kind must be 'hole' or 'orbit'");
    const auto range = get_field<std::vector<double>>(j, "range", {});
    if (range.size() != 2) throw UsageError("range must be [low, high]");
    lo = range[0];
    hi = range[1];
    steps = get_field<int>(j, "steps", 0);
    mu0 = get_field<double>(j, "mu0", mu0);
    mub = get_field<double>(j, "mub", mub);
    radius = get_field<double>(j, "radius", radius);
    if (!(lo < hi) || steps < 2) throw UsageError("empty scan range");
    if (opts.threads < 1) throw UsageError("--threads must be at least 1");
    json request = j;
    request["command"] = "scan";
    manifest.digest = config_digest(request);
    prepare_out_dir(opts.out_dir, opts.force);
  } catch (const UsageError& e) {
    log << "error: " << e.what() << '\n';
    return kUsage;
  }

  std::vector<ScanPoint> points(steps);
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int i = next++; i < steps; i = next++) {
      const double p = lo + (hi - lo) * i / (steps - 1);
      try {
        points[i] = kind == "hole" ? hole_point(p, mu0, mub) : orbit_point(p, radius);
      } catch (const std::exception& e) {
        points[i].values = {p};
        points[i].status = std::string("error: ") + e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < std::min(opts.threads, steps); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  const std::vector<std::string> head =
      kind == "hole" ? std::vector<std::string>{"rho", "edge_trace", "edge_residual", "status"}
                     : std::vector<std::string>{"ratio", "omega", "omega_radius", "edge_residual",
                                                "status"};
  std::string csv = join_row(head);
  int failed = 0;
  for (const auto& p : points) {
    std::vector<std::string> row;
    for (std::size_t c = 0; c + 1 < head.size(); ++c)
      row.push_back(c < p.values.size() ? format_number(p.values[c]) : "nan");
    std::string status = p.status;
    std::replace(status.begin(), status.end(), ',', ';');
    row.push_back(status);
    csv += join_row(row);
    if (p.status != "ok") ++failed;
  }

  json summary{{"points", steps}, {"failed", failed}};
  if (kind == "hole") {
    summary["critical_radius"] = mub / mu0;
    json bracket = nullptr;
    for (int i = 0; i + 1 < steps; ++i) {
      if (points[i].status != "ok" || points[i + 1].status != "ok") continue;
      const double a = points[i].values[2], b = points[i + 1].values[2];
      if ((a < 0.0 && b >= 0.0) || (a > 0.0 && b <= 0.0)) {
        bracket = {points[i].values[0], points[i + 1].values[0]};
        break;
      }
    }
    summary["sign_change"] = bracket;
  } else {
    bool monotone = true;
    double max_wr = 0.0;
    for (int i = 0; i < steps; ++i) {
      if (points[i].status != "ok") continue;
      max_wr = std::max(max_wr, points[i].values[2]);
      if (i > 0 && points[i - 1].status == "ok" && !(points[i].values[1] > points[i - 1].values[1]))
        monotone = false;
    }
    summary["omega_monotone"] = monotone;
    summary["max_omega_radius"] = max_wr;
  }

  const fs::path file = opts.out_dir / "scan.csv";
  write_text(file, csv);
  manifest.outputs = {file.string()};
  manifest.summary = summary;
  write_manifest(opts.out_dir, manifest);
  log << "scan " << kind << ": " << steps << " points, " << failed << " failed; "
      << summary.dump() << '\n';
  return failed == 0 ? kSuccess : kFailure;
}

}  // namespace edgebrane::cli
