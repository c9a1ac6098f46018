#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "beam/config.hpp"

namespace beam {

/// Exit statuses of the driver.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntimeError = 1;
inline constexpr int kExitClaimFailed = 2;

std::vector<std::string> SubcommandNames();

/// Runs one subcommand, writes its CSVs and metadata.txt into `out_dir`
/// (created if needed) and returns the exit status. Progress goes to `log`;
/// every failure also produces one line on `err` of the form
///   error code=<status> kind=<kind> message="<text>"
int RunSubcommand(std::string_view name, const ExperimentConfig& config,
                  const std::filesystem::path& config_path,
                  const std::filesystem::path& out_dir, std::ostream& log,
                  std::ostream& err);

/// Version string baked in at build time: <semver>+<git describe>.
std::string VersionString();

}  // namespace beam
