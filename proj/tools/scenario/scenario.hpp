#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace biham::cli {

enum class Command { Decompose, Evolve, Verify, Sweep, Continuum };

[[nodiscard]] std::optional<Command> parse_command(std::string_view name);
[[nodiscard]] std::string_view command_name(Command command);

struct ScenarioConfig {
  Command command = Command::Decompose;
  nlohmann::json params = nlohmann::json::object();
  std::filesystem::path out_dir = ".";
  /// Relative input paths (matrix_file) resolve against this directory.
  std::filesystem::path base_dir = ".";
  std::uint64_t seed = 0;
};

struct Diagnostic {
  std::string kind;  ///< "schema", "physics" or "io"
  std::string path;  ///< JSON pointer-ish location, e.g. "path.z1"
  std::string message;
};

[[nodiscard]] nlohmann::json to_json(const std::vector<Diagnostic>& diagnostics);

/// Every schema, physics-precondition and missing-input problem, without
/// running anything.
[[nodiscard]] std::vector<Diagnostic> validate(const ScenarioConfig& config);

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitCompute = 3, kExitIo = 4 };

struct RunResult {
  int exit_code = kExitOk;
  /// Machine-readable error name: ConfigError, IoError, or the core ErrorCode.
  std::string error;
  std::string message;
  std::vector<Diagnostic> diagnostics;
  std::vector<std::filesystem::path> artifacts;
};

/// Validates, executes and writes artifacts (temp-then-rename). Never throws.
[[nodiscard]] RunResult run(const ScenarioConfig& config);

/// Reads a JSON config file (comments rejected) for `command`. Throws
/// IoError if unreadable and nlohmann::json::parse_error on malformed JSON.
[[nodiscard]] ScenarioConfig load_config(Command command, const std::filesystem::path& file,
                                         const std::filesystem::path& out_dir,
                                         std::optional<std::uint64_t> seed);

}  // namespace biham::cli
