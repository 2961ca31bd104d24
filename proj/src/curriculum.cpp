#include "lotr/curriculum.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "lotr/errors.hpp"
#include "lotr/parallel.hpp"

namespace lotr {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Stream tags keep the seed families of different stages apart.
constexpr std::uint64_t kStep1Tag = 0x5701, kStep2Tag = 0x5702, kEvalTag = 0xe7a1, kSelectTag = 0x5e1e;

std::string chain_of(int step1) { return "0->" + std::to_string(step1); }
std::string chain_of(int step1, int step2) { return chain_of(step1) + "->" + std::to_string(step2); }

}  // namespace

void Budget::validate() const {
  if (iterations < 1) throw ConfigError("budget iterations must be positive");
  if (episodes_per_iteration < 1) throw ConfigError("budget episodes_per_iteration must be positive");
  if (episode_cap && *episode_cap < episodes_per_iteration)
    throw ConfigError("episode cap must be at least episodes_per_iteration");
}

const char* to_string(StopReason r) noexcept { return r == StopReason::Budget ? "budget" : "threshold"; }

const char* to_string(StrategyKind k) noexcept {
  switch (k) {
    case StrategyKind::OneStep: return "one_step";
    case StrategyKind::TwoStepContinued: return "two_step_continued";
    case StrategyKind::TwoStepInterrupted: return "two_step_interrupted";
  }
  return "?";
}

StrategyKind parse_strategy(const std::string& name) {
  for (auto k : {StrategyKind::OneStep, StrategyKind::TwoStepContinued, StrategyKind::TwoStepInterrupted})
    if (name == to_string(k)) return k;
  throw ConfigError("unknown strategy '" + name + "'");
}

std::vector<double> trailing_average(std::span<const double> series, int window) {
  if (window < 1) throw ConfigError("trailing window must be positive");
  const auto w = static_cast<std::size_t>(window);
  std::vector<double> out;
  if (series.size() < w) return out;
  out.reserve(series.size() - w + 1);
  IncrementalMean first;
  for (std::size_t i = 0; i < w; ++i) first.add(series[i]);
  double mean = first.value();
  out.push_back(mean);
  for (std::size_t i = w; i < series.size(); ++i) {
    mean += (series[i] - series[i - w]) / static_cast<double>(w);
    out.push_back(mean);
  }
  return out;
}

double RunRecord::final_average(int window) const {
  if (rewards.empty()) return 0.0;
  const auto n = std::min<std::size_t>(rewards.size(), static_cast<std::size_t>(std::max(window, 1)));
  return episode_credit(std::span<const double>(rewards).last(n));
}

double RunRecord::best_trailing(int window) const {
  auto t = trailing_average(rewards, window);
  if (t.empty()) return final_average(window);
  return *std::max_element(t.begin(), t.end());
}

RunRecord run_learning(AgentAssignment team, int difficulty, int max_episodes, std::optional<InterruptRule> interrupt,
                       std::uint64_t seed, std::shared_ptr<const GameData> data, GameConfig base) {
  if (max_episodes < 1) throw ConfigError("run needs at least one episode");
  if (interrupt && (interrupt->window < 1 || interrupt->window > max_episodes))
    throw ConfigError("interrupt window must be in 1..episode cap");
  base.difficulty = difficulty;
  base.validate();
  team.validate();

  const auto start = Clock::now();
  RunRecord run;
  run.difficulty = difficulty;
  run.seed = seed;
  run.log_window = interrupt ? interrupt->window : 100;
  run.rewards.reserve(static_cast<std::size_t>(max_episodes));

  Rng agent_rng(derive_seed(seed, {0xa9e47ULL}));
  const auto window = static_cast<std::size_t>(run.log_window);
  double window_mean = 0.0;
  for (int episode = 0; episode < max_episodes; ++episode) {
    GameConfig config = base;
    config.seed = derive_seed(seed, {static_cast<std::uint64_t>(episode)});
    GameState s = new_game(config, data);
    auto result = train_game(s, team, agent_rng);
    const double r = terminal_reward(result.outcome);
    run.rewards.push_back(r);
    run.wins.push_back(result.outcome == Outcome::Win);

    const std::size_t n = run.rewards.size();
    if (n < window) {
      window_mean += (r - window_mean) / static_cast<double>(n);
      continue;
    }
    if (n == window)
      window_mean += (r - window_mean) / static_cast<double>(n);
    else
      window_mean += (r - run.rewards[n - 1 - window]) / static_cast<double>(window);
    run.trailing.push_back(window_mean);
    if (interrupt && window_mean > interrupt->threshold) {
      run.stop_reason = StopReason::Threshold;
      break;
    }
  }
  run.episodes_used = static_cast<int>(run.rewards.size());
  run.agents = std::move(team);
  run.seconds = seconds_since(start);
  return run;
}

void write_run_log(std::ostream& out, const RunRecord& run) {
  out << "episode,reward,win,trailing_avg\n";
  const auto window = static_cast<std::size_t>(run.log_window);
  auto old = out.precision(6);
  for (std::size_t i = 0; i < run.rewards.size(); ++i) {
    out << (i + 1) << ',' << run.rewards[i] << ',' << (run.wins[i] ? 1 : 0) << ',';
    if (i + 1 >= window && i + 1 - window < run.trailing.size()) out << run.trailing[i + 1 - window];
    out << '\n';
  }
  out.precision(old);
}

StrategySpec StrategySpec::defaults(StrategyKind kind) {
  StrategySpec s;
  s.kind = kind;
  if (kind == StrategyKind::TwoStepInterrupted) {
    s.step1 = Budget{1, 10000, 10000};
    s.step2 = Budget{20, 2500, 50000};
  }
  return s;
}

void StrategySpec::validate() const {
  step1.validate();
  step2.validate();
  if (step1_difficulties.empty()) throw ConfigError("no step-1 difficulties");
  for (int d : step1_difficulties) {
    if (d < 1 || d > 20) throw ConfigError("difficulty out of range: " + std::to_string(d));
    if (d >= step2_difficulty)
      throw ConfigError("step-1 difficulty " + std::to_string(d) + " must be below the step-2 difficulty " +
                        std::to_string(step2_difficulty));
  }
  if (step2_difficulty < 1 || step2_difficulty > 20) throw ConfigError("step-2 difficulty out of range");
  if (eval_games < 1) throw ConfigError("eval_games must be positive");
  if (score_window < 1) throw ConfigError("score_window must be positive");
  if (kind == StrategyKind::TwoStepInterrupted) {
    if (!step1.episode_cap || !step2.episode_cap) throw ConfigError("interrupted learning needs episode caps");
    if (step1_interrupt.window > *step1.episode_cap || step2_interrupt.window > *step2.episode_cap)
      throw ConfigError("interrupt window exceeds the episode cap");
  }
  AgentAssignment::parse(agents);
}

namespace {

struct Step1Job {
  int difficulty;
  int iteration;
};

std::vector<Step1Job> step1_jobs(const StrategySpec& spec) {
  std::vector<Step1Job> jobs;
  for (int d : spec.step1_difficulties)
    for (int it = 0; it < spec.step1.iterations; ++it) jobs.push_back({d, it});
  return jobs;
}

// Fresh networks, trained at a reduced difficulty. Shared by every strategy so
// identical (spec seed, difficulty, iteration) triples train identical networks.
RunRecord train_step1(const StrategySpec& spec, const Step1Job& job, int max_episodes,
                      std::optional<InterruptRule> interrupt, const std::shared_ptr<const GameData>& data) {
  auto team = AgentAssignment::parse(spec.agents);
  const auto d = static_cast<std::uint64_t>(job.difficulty), it = static_cast<std::uint64_t>(job.iteration);
  team.initialize(spec.hp, derive_seed(spec.seed, {kStep1Tag, d, it}));
  return run_learning(std::move(team), job.difficulty, max_episodes, interrupt,
                      derive_seed(spec.seed, {kStep1Tag, d, it, 1}), data, spec.base);
}

RunSummary summarize(const RunRecord& run, std::string chain, int iteration, int score_window) {
  RunSummary s;
  s.chain = std::move(chain);
  s.difficulty = run.difficulty;
  s.iteration = iteration;
  s.episodes = run.episodes_used;
  s.stop = run.stop_reason;
  s.final_average = run.final_average(score_window);
  s.seconds = run.seconds;
  return s;
}

EvalReport final_eval(const StrategySpec& spec, const AgentAssignment& team,
                      const std::shared_ptr<const GameData>& data) {
  return evaluate(team, spec.step2_difficulty, spec.eval_games, derive_seed(spec.seed, {kEvalTag}), data, spec.base);
}

void pick_best(StrategyReport& report, const std::vector<RunSummary>& candidates,
               const std::vector<AgentAssignment>& agents) {
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!candidates[i].eval) continue;
    if (!report.best || candidates[i].eval->winrate > report.best->eval->winrate) {
      report.best = candidates[i];
      report.best_agents = agents[i];
    }
  }
}

long long episodes_of(const std::vector<RunSummary>& runs) {
  long long n = 0;
  for (const auto& r : runs) n += r.episodes;
  return n;
}

// Continues a survivor at the step-2 difficulty; returns the chosen run.
struct Step2Outcome {
  RunSummary summary;
  AgentAssignment agents;
  long long episodes = 0;
};

}  // namespace

StrategyReport one_step(const StrategySpec& spec, std::shared_ptr<const GameData> data) {
  spec.validate();
  const auto start = Clock::now();
  const auto jobs = step1_jobs(spec);
  std::vector<RunSummary> runs(jobs.size());
  std::vector<AgentAssignment> agents(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    auto run = train_step1(spec, jobs[i], spec.step1.episodes_per_iteration, std::nullopt, data);
    runs[i] = summarize(run, chain_of(jobs[i].difficulty, spec.step2_difficulty), jobs[i].iteration, spec.score_window);
    runs[i].eval = final_eval(spec, run.agents, data);
    agents[i] = std::move(run.agents);
  });

  StrategyReport report;
  report.kind = StrategyKind::OneStep;
  std::map<int, std::pair<double, int>> sums;
  for (const auto& r : runs) {
    auto& [sum, n] = sums[r.difficulty];
    sum += r.eval->winrate;
    ++n;
  }
  for (const auto& [d, sn] : sums) report.mean_winrate[d] = sn.first / sn.second;
  pick_best(report, runs, agents);
  report.total_episodes = episodes_of(runs);
  report.step1 = std::move(runs);
  report.seconds = seconds_since(start);
  return report;
}

StrategyReport two_step_continued(const StrategySpec& spec, std::shared_ptr<const GameData> data) {
  spec.validate();
  const auto start = Clock::now();
  const auto jobs = step1_jobs(spec);
  std::vector<RunSummary> step1(jobs.size());
  std::vector<AgentAssignment> step1_agents(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    auto run = train_step1(spec, jobs[i], spec.step1.episodes_per_iteration, std::nullopt, data);
    step1[i] = summarize(run, chain_of(jobs[i].difficulty), jobs[i].iteration, spec.score_window);
    step1[i].eval = evaluate(run.agents, jobs[i].difficulty, spec.eval_games, derive_seed(spec.seed, {kSelectTag}),
                             data, spec.base);
    step1[i].selected = step1[i].eval->winrate > spec.selection_winrate;
    step1_agents[i] = std::move(run.agents);
  });

  std::vector<std::size_t> survivors;
  for (std::size_t i = 0; i < step1.size(); ++i)
    if (step1[i].selected) survivors.push_back(i);

  // Every (survivor, iteration) pair restarts from the survivor's weights.
  const auto iters = static_cast<std::size_t>(spec.step2.iterations);
  std::vector<RunSummary> step2_runs(survivors.size() * iters);
  std::vector<AgentAssignment> step2_agents(step2_runs.size());
  parallel_for(step2_runs.size(), [&](std::size_t k) {
    const std::size_t parent = survivors[k / iters];
    const auto it = static_cast<std::uint64_t>(k % iters);
    const auto& job = jobs[parent];
    auto run = run_learning(step1_agents[parent].clone(), spec.step2_difficulty, spec.step2.episodes_per_iteration,
                            std::nullopt,
                            derive_seed(spec.seed, {kStep2Tag, static_cast<std::uint64_t>(job.difficulty),
                                                    static_cast<std::uint64_t>(job.iteration), it}),
                            data, spec.base);
    step2_runs[k] = summarize(run, chain_of(job.difficulty, spec.step2_difficulty), static_cast<int>(it),
                              spec.score_window);
    step2_agents[k] = std::move(run.agents);
  });

  StrategyReport report;
  report.kind = StrategyKind::TwoStepContinued;
  std::vector<RunSummary> finals;
  std::vector<AgentAssignment> final_agents;
  for (std::size_t s = 0; s < survivors.size(); ++s) {
    std::size_t best = s * iters;
    for (std::size_t k = s * iters; k < (s + 1) * iters; ++k)
      if (step2_runs[k].final_average > step2_runs[best].final_average) best = k;
    step2_runs[best].selected = true;
    finals.push_back(step2_runs[best]);
    final_agents.push_back(step2_agents[best]);
  }
  parallel_for(finals.size(), [&](std::size_t i) { finals[i].eval = final_eval(spec, final_agents[i], data); });
  for (std::size_t s = 0; s < survivors.size(); ++s)
    for (std::size_t k = s * iters; k < (s + 1) * iters; ++k)
      if (step2_runs[k].selected) step2_runs[k].eval = finals[s].eval;

  std::map<int, std::pair<double, int>> sums;
  for (const auto& f : finals) {
    auto& [sum, n] = sums[f.difficulty];
    sum += f.eval->winrate;
    ++n;
  }
  for (const auto& [d, sn] : sums) report.mean_winrate[d] = sn.first / sn.second;
  pick_best(report, finals, final_agents);
  report.total_episodes = episodes_of(step1) + episodes_of(step2_runs);
  report.step1 = std::move(step1);
  report.step2 = std::move(step2_runs);
  report.seconds = seconds_since(start);
  return report;
}

StrategyReport two_step_interrupted(const StrategySpec& spec, std::shared_ptr<const GameData> data) {
  spec.validate();
  const auto start = Clock::now();
  const auto jobs = step1_jobs(spec);
  std::vector<RunSummary> step1(jobs.size());
  std::vector<AgentAssignment> step1_agents(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    auto run = train_step1(spec, jobs[i], *spec.step1.episode_cap, spec.step1_interrupt, data);
    step1[i] = summarize(run, chain_of(jobs[i].difficulty), jobs[i].iteration, spec.step1_interrupt.window);
    step1[i].selected = run.stop_reason == StopReason::Threshold;
    step1_agents[i] = std::move(run.agents);
  });

  std::vector<std::size_t> survivors;
  for (std::size_t i = 0; i < step1.size(); ++i)
    if (step1[i].selected) survivors.push_back(i);

  std::vector<RunSummary> step2(survivors.size());
  std::vector<AgentAssignment> step2_agents(survivors.size());
  parallel_for(survivors.size(), [&](std::size_t k) {
    const auto& job = jobs[survivors[k]];
    auto run = run_learning(step1_agents[survivors[k]].clone(), spec.step2_difficulty, *spec.step2.episode_cap,
                            spec.step2_interrupt,
                            derive_seed(spec.seed, {kStep2Tag, static_cast<std::uint64_t>(job.difficulty),
                                                    static_cast<std::uint64_t>(job.iteration)}),
                            data, spec.base);
    step2[k] = summarize(run, chain_of(job.difficulty, spec.step2_difficulty), job.iteration,
                         spec.step2_interrupt.window);
    step2[k].selected = true;
    step2[k].eval = final_eval(spec, run.agents, data);
    step2_agents[k] = std::move(run.agents);
  });

  StrategyReport report;
  report.kind = StrategyKind::TwoStepInterrupted;
  std::map<int, std::pair<double, int>> sums;
  for (const auto& f : step2) {
    auto& [sum, n] = sums[f.difficulty];
    sum += f.eval->winrate;
    ++n;
  }
  for (const auto& [d, sn] : sums) report.mean_winrate[d] = sn.first / sn.second;
  pick_best(report, step2, step2_agents);
  report.total_episodes = episodes_of(step1) + episodes_of(step2);
  report.step1 = std::move(step1);
  report.step2 = std::move(step2);
  report.seconds = seconds_since(start);
  return report;
}

StrategyReport run_strategy(const StrategySpec& spec, std::shared_ptr<const GameData> data) {
  switch (spec.kind) {
    case StrategyKind::OneStep: return one_step(spec, std::move(data));
    case StrategyKind::TwoStepContinued: return two_step_continued(spec, std::move(data));
    case StrategyKind::TwoStepInterrupted: return two_step_interrupted(spec, std::move(data));
  }
  throw ConfigError("unknown strategy");
}

std::string StrategyReport::describe() const {
  std::ostringstream out;
  out << std::fixed;
  out << "strategy " << to_string(kind) << '\n';
  auto write_run = [&](const char* stage, const RunSummary& r) {
    out << stage << ' ' << r.chain << " iter " << r.iteration << " episodes " << r.episodes << " stop "
        << to_string(r.stop) << std::setprecision(3) << " avg " << r.final_average;
    if (r.eval)
      out << std::setprecision(1) << " winrate " << 100.0 * r.eval->winrate << " +- " << 100.0 * r.eval->ci << " %"
          << " @" << r.eval->difficulty;
    out << (r.selected ? " selected" : "") << std::setprecision(1) << " time " << r.seconds << "s\n";
  };
  for (const auto& r : step1) write_run("step1", r);
  if (kind != StrategyKind::OneStep && step2.empty()) out << "step2 none: no network passed selection\n";
  for (const auto& r : step2) write_run("step2", r);
  for (const auto& [d, w] : mean_winrate) out << "mean_winrate " << d << ' ' << std::setprecision(3) << w << '\n';
  if (best) {
    out << "best " << best->chain << std::setprecision(1) << " winrate " << 100.0 * best->eval->winrate << " +- "
        << 100.0 * best->eval->ci << " %\n";
  } else {
    out << "best none\n";
  }
  out << "total_episodes " << total_episodes << '\n';
  out << "wall_clock " << std::setprecision(1) << seconds << "s\n";
  return out.str();
}

}  // namespace lotr
