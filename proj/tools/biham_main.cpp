#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "scenario/io.hpp"
#include "scenario/log.hpp"
#include "scenario/scenario.hpp"

namespace {

void report_error(const std::string& code, const std::string& message) {
  std::cerr << nlohmann::json{{"error", code}, {"message", message}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  using namespace biham::cli;

  CLI::App app{"biham: biorthogonal Hamiltonian toolkit scenario runner"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  bool validate_only = false;

  for (const char* name : {"decompose", "evolve", "verify", "sweep", "continuum"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON scenario config")->required();
    sub->add_option("--out", out_dir, "Directory for output artifacts");
    sub->add_option("--seed", seed, "Seed for randomized inputs");
    sub->add_flag("--validate-only", validate_only, "Report diagnostics without running");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const auto command = parse_command(app.get_subcommands().front()->get_name());

  ScenarioConfig config;
  try {
    config = load_config(*command, config_path, out_dir, seed);
  } catch (const IoError& e) {
    report_error("IoError", e.what());
    return kExitIo;
  } catch (const nlohmann::json::parse_error& e) {
    report_error("ConfigError", std::string("malformed config: ") + e.what());
    return kExitConfig;
  }

  if (validate_only) {
    const auto diagnostics = validate(config);
    std::cout << to_json(diagnostics).dump(2) << '\n';
    return diagnostics.empty() ? kExitOk : kExitConfig;
  }

  const RunResult result = run(config);
  if (result.exit_code != kExitOk) {
    report_error(result.error, result.message);
    if (!result.diagnostics.empty()) std::cerr << to_json(result.diagnostics).dump(2) << '\n';
    return result.exit_code;
  }
  for (const auto& artifact : result.artifacts) std::cout << artifact.string() << '\n';
  return kExitOk;
}
