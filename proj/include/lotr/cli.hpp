#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "lotr/simulator.hpp"

namespace lotr {

/// Writes one bundle per RL slot as <dir>/<role>.bundle.
void save_team(const std::filesystem::path& dir, const AgentAssignment& team);
/// Parses `agents` and fills its RL slots from <dir>/<role>.bundle. Throws
/// BundleMismatch when a bundle disagrees with the requested slot.
AgentAssignment load_team(const std::filesystem::path& dir, const std::string& agents);

/// Exit codes: 0 success, 1 runtime error, 2 usage or configuration error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int cli_main(int argc, const char* const* argv);

}  // namespace lotr
