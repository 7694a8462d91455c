// csd: citation structural diversity pipeline.
//
//   csd ingest    --corpus raw.json --format dblp_v13 --out corpus.jsonl
//   csd sd        --corpus corpus.jsonl --embeddings vecs.jsonl --out sd.csv
//   csd correlate --corpus corpus.jsonl --diversity sd.csv --out results/
//
// Exit status: 0 ok, 1 usage error, 2 data error.

#include <cstdlib>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "commands.hpp"
#include "csd/error.hpp"

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_logger_mt("csd");
  logger->set_pattern("csd: %l: %v");
  auto level = spdlog::level::warn;
  if (const char* env = std::getenv("CSD_LOG")) {
    std::string s(env);
    if (s == "error") level = spdlog::level::err;
    else if (s == "warn") level = spdlog::level::warn;
    else if (s == "info") level = spdlog::level::info;
    else if (s == "debug") level = spdlog::level::debug;
  }
  logger->set_level(level);
  spdlog::set_default_logger(logger);
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();

  CLI::App app{"Citation structural diversity toolkit", "csd"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  csd::cli::register_commands(app);

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    if (!args.empty() && app.get_subcommand_no_throw(args[0]) != nullptr) {
      std::vector<std::string> rest(args.begin() + 1, args.end());
      auto extra = csd::cli::config_arguments(rest);
      args.insert(args.begin() + 1, extra.begin(), extra.end());
    }
    // CLI11 consumes the vector from the back.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const csd::UsageError& e) {
    spdlog::error("{}", e.what());
    return 1;
  } catch (const csd::DataError& e) {
    spdlog::error("{}", e.what());
    return 2;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 2;
  }
  return 0;
}
