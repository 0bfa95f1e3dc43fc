#pragma once

#include "edgebrane/dynamics.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace edgebrane::cli {

inline constexpr int kSchemaVersion = 1;

enum ExitCode { kSuccess = 0, kFailure = 1, kUsage = 2 };

/// Bad flags, unreadable or invalid config, refused overwrite: exit 2.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// %.12e
std::string format_number(double v);

/// Hex SHA-256 of the canonical dump (sorted keys, no whitespace).
std::string config_digest(const nlohmann::json& config);

struct RunManifest {
  std::string command;
  std::string digest;
  std::string version;
  std::string started;
  std::string finished;
  std::string terminal_event = "none";
  std::vector<std::string> outputs;
  nlohmann::json summary = nlohmann::json::object();

  nlohmann::json to_json() const;
};

/// Reads and validates an evolve config (schema_version required, unknown
/// keys rejected). Throws UsageError.
SimulationConfig parse_simulation_config(const nlohmann::json& j);

struct VerifyOptions {
  std::vector<std::string> entries;  ///< empty: every catalog name with defaults
  double tolerance = -1.0;           ///< > 0 replaces every expectation's tolerance
  std::filesystem::path out_dir = ".";
  bool force = false;
};

struct EvolveOptions {
  std::filesystem::path config;
  std::filesystem::path out_dir = ".";
  bool force = false;
};

struct ScanOptions {
  std::filesystem::path spec;
  std::filesystem::path out_dir = ".";
  bool force = false;
  int threads = 1;
};

/// Each command writes its CSV files and manifest.json into out_dir and
/// returns the exit code; progress and errors go to `log`.
int cmd_verify(const VerifyOptions& opts, std::ostream& log);
int cmd_evolve(const EvolveOptions& opts, std::ostream& log);
int cmd_scan(const ScanOptions& opts, std::ostream& log);

}  // namespace edgebrane::cli
