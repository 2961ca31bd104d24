#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "lotr/curriculum.hpp"
#include "lotr/harness.hpp"

namespace lotr {

/// Everything the command line can set, with file-backed defaults.
struct Settings {
  GameConfig game;
  std::uint64_t seed = 1;
  std::string agents = "random,rl-direct:2,random";
  HyperParams hp;
  int episodes = 1000;
  int games = 1000;
  std::optional<InterruptRule> interrupt;
  StrategySpec strategy;
  GridTraining grid;
  HpoSpace hpo;
  int trials = 100;
  std::filesystem::path cards, deck, encounter;
  std::filesystem::path out = ".";
};

/// Sets one `key = value` pair. Throws ConfigError for unknown keys or bad values.
void apply_setting(Settings& s, const std::string& key, const std::string& value);

/// Line-oriented `key = value`, `#` starts a comment. Throws FormatError with the line number.
void parse_config(std::istream& in, Settings& s, const std::string& source = "<config>");
void load_config(const std::filesystem::path& path, Settings& s);

/// Every key apply_setting understands.
const std::vector<std::string>& config_keys();

}  // namespace lotr
