#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lotr/evaluation.hpp"
#include "lotr/simulator.hpp"

namespace lotr {

struct Budget {
  int iterations = 1;
  int episodes_per_iteration = 1000;
  std::optional<int> episode_cap;

  void validate() const;
};

/// Stop once the mean reward of the last `window` episodes exceeds `threshold`.
struct InterruptRule {
  int window = 100;
  double threshold = 0.5;
};

enum class StopReason { Budget, Threshold };
const char* to_string(StopReason r) noexcept;

struct RunRecord {
  int difficulty = 0;
  std::uint64_t seed = 0;
  std::vector<double> rewards;
  std::vector<bool> wins;
  int log_window = 100;
  std::vector<double> trailing;  // trailing[i] covers episodes i-log_window+1..i (from index log_window-1)
  int episodes_used = 0;
  StopReason stop_reason = StopReason::Budget;
  AgentAssignment agents;
  double seconds = 0.0;

  /// Mean reward of the last `window` episodes (all of them if fewer).
  double final_average(int window) const;
  /// Best trailing average over any full window of `window` episodes.
  double best_trailing(int window) const;
};

/// Sliding mean, defined from index window-1 onward (length n-window+1).
std::vector<double> trailing_average(std::span<const double> series, int window);

/// Trains `team` in place for up to `max_episodes` games at `difficulty`.
RunRecord run_learning(AgentAssignment team, int difficulty, int max_episodes, std::optional<InterruptRule> interrupt,
                       std::uint64_t seed, std::shared_ptr<const GameData> data, GameConfig base = {});

/// CSV: episode,reward,win,trailing_avg (trailing empty before the window fills).
void write_run_log(std::ostream& out, const RunRecord& run);

enum class StrategyKind { OneStep, TwoStepContinued, TwoStepInterrupted };
const char* to_string(StrategyKind k) noexcept;
StrategyKind parse_strategy(const std::string& name);

struct StrategySpec {
  StrategyKind kind = StrategyKind::OneStep;
  std::string agents = "random,rl-direct:2,random";
  HyperParams hp;
  std::vector<int> step1_difficulties{1, 2, 3, 4, 5, 6, 7, 8, 9};
  int step2_difficulty = 20;
  Budget step1{10, 1000, std::nullopt};
  Budget step2{20, 2500, std::nullopt};
  double selection_winrate = 0.90;  // continued: strict >
  InterruptRule step1_interrupt{100, 0.5};
  InterruptRule step2_interrupt{100, -0.1};
  int score_window = 1000;  // picks the best step-2 iteration
  int eval_games = 1000;
  std::uint64_t seed = 1;
  GameConfig base;

  /// Paper-scale budgets for each strategy.
  static StrategySpec defaults(StrategyKind kind);
  void validate() const;
};

/// One trained network and where it came from.
struct RunSummary {
  std::string chain;  // e.g. "0->6" or "0->6->20"
  int difficulty = 0;
  int iteration = 0;
  int episodes = 0;
  StopReason stop = StopReason::Budget;
  double final_average = 0.0;
  double seconds = 0.0;
  std::optional<EvalReport> eval;
  bool selected = false;
};

struct StrategyReport {
  StrategyKind kind = StrategyKind::OneStep;
  std::vector<RunSummary> step1;
  std::vector<RunSummary> step2;
  /// Mean final winrate (at the step-2 difficulty) per step-1 difficulty.
  std::map<int, double> mean_winrate;
  std::optional<RunSummary> best;
  AgentAssignment best_agents;
  long long total_episodes = 0;
  double seconds = 0.0;

  std::string describe() const;
};

StrategyReport one_step(const StrategySpec& spec, std::shared_ptr<const GameData> data);
StrategyReport two_step_continued(const StrategySpec& spec, std::shared_ptr<const GameData> data);
StrategyReport two_step_interrupted(const StrategySpec& spec, std::shared_ptr<const GameData> data);
StrategyReport run_strategy(const StrategySpec& spec, std::shared_ptr<const GameData> data);

}  // namespace lotr
