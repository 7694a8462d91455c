#pragma once

#include <string>
#include <vector>

namespace CLI {
class App;
}

namespace csd::cli {

/// Adds ingest, component, sd, correlate, trends, predict and report to
/// `app`. Each subcommand runs from its parse callback.
void register_commands(CLI::App& app);

/// Flag arguments for `--config <file>` found in `args` (after the
/// subcommand), skipping keys that `args` already sets. Returns an empty list
/// when no config is given.
std::vector<std::string> config_arguments(const std::vector<std::string>& args);

}  // namespace csd::cli
