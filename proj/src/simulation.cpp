#include "potts/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <thread>

#include <fmt/format.h>

namespace potts {

std::size_t InnovatorSchedule::quota(std::size_t agents) const noexcept {
  return static_cast<std::size_t>(std::floor(target_fraction * static_cast<double>(agents)));
}

void InnovatorSchedule::validate(const OptionModel& opts) const {
  if (product >= opts.size() || product == opts.non_adoption()) {
    throw ConfigError(fmt::format("product index {} is not an adoption state", product), "innovators");
  }
  const std::string prefix = "innovators." + opts.label(product);
  if (rate < 1) throw ConfigError("must be >= 1", prefix + ".rate");
  if (!(target_fraction > 0.0 && target_fraction < 1.0)) {
    throw ConfigError(fmt::format("must lie in (0, 1), got {}", target_fraction), prefix + ".target_fraction");
  }
}

SimulationState::SimulationState(std::size_t agents, const OptionModel& opts)
    : SimulationState(std::vector<StateIndex>(agents, opts.non_adoption()), opts.size()) {}

SimulationState::SimulationState(std::vector<StateIndex> states, int options, std::size_t tick,
                                 std::vector<std::size_t> innovators)
    : tick_(tick), states_(std::move(states)), counts_(static_cast<std::size_t>(options), 0),
      innovators_(std::move(innovators)) {
  if (options < 2 || options > kMaxOptions) throw UsageError("option count out of range");
  if (innovators_.empty()) innovators_.assign(static_cast<std::size_t>(options), 0);
  if (innovators_.size() != static_cast<std::size_t>(options)) throw UsageError("innovator tally has wrong length");
  for (StateIndex s : states_) {
    if (s >= options) throw UsageError(fmt::format("state {} out of range", s));
    ++counts_[s];
  }
}

void SimulationState::set_state(AgentId agent, StateIndex state) {
  if (state >= options()) throw UsageError(fmt::format("state {} out of range", state));
  auto& slot = states_.at(agent);
  --counts_[slot];
  ++counts_[state];
  slot = state;
}

void SimulationState::place_innovator(AgentId agent, StateIndex product) {
  set_state(agent, product);
  ++innovators_.at(product);
}

void TimeSeries::append(std::span<const std::int64_t> counts) {
  if (counts.size() != static_cast<std::size_t>(options_)) throw UsageError("row length does not match option count");
  counts_.insert(counts_.end(), counts.begin(), counts.end());
}

std::int64_t TimeSeries::count(std::size_t tick, int state) const {
  if (tick >= ticks() || state < 0 || state >= options_) throw UsageError("time-series index out of range");
  return counts_[tick * static_cast<std::size_t>(options_) + static_cast<std::size_t>(state)];
}

double TimeSeries::fraction(std::size_t tick, int state) const {
  return static_cast<double>(count(tick, state)) / static_cast<double>(agents_);
}

OptionVector<double> TimeSeries::row(std::size_t tick) const {
  OptionVector<double> out(options_);
  for (int k = 0; k < options_; ++k) out[k] = fraction(tick, k);
  return out;
}

bool TimeSeries::same_counts(std::size_t a, std::size_t b) const {
  for (int k = 0; k < options_; ++k) {
    if (count(a, k) != count(b, k)) return false;
  }
  return true;
}

Eigen::MatrixXd TimeSeries::fractions() const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(ticks()), options_);
  for (std::size_t t = 0; t < ticks(); ++t) out.row(static_cast<Eigen::Index>(t)) = row(t).transpose();
  return out;
}

std::size_t seed_innovators(SimulationState& st, std::span<const InnovatorSchedule> schedules,
                            const OptionModel& opts, std::uint64_t seed) {
  std::vector<const InnovatorSchedule*> ordered;
  for (const auto& s : schedules) ordered.push_back(&s);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto* a, const auto* b) { return a->product < b->product; });

  std::size_t shortfall = 0;
  std::vector<AgentId> candidates;
  for (const auto* schedule : ordered) {
    if (schedule->start_tick > st.tick()) continue;
    const std::size_t quota = schedule->quota(st.agents());
    const std::size_t placed = st.innovators(schedule->product);
    if (placed >= quota) continue;
    const std::size_t wanted = std::min(schedule->rate, quota - placed);

    candidates.clear();
    const auto states = st.states();
    for (AgentId a = 0; a < states.size(); ++a) {
      if (states[a] == opts.non_adoption()) candidates.push_back(a);
    }
    const std::size_t take = std::min(wanted, candidates.size());
    shortfall += wanted - take;

    RandomStream rng(seed, StreamDomain::kInnovators, st.tick(), schedule->product);
    for (std::size_t i = 0; i < take; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.bounded(candidates.size() - i));
      std::swap(candidates[i], candidates[j]);
      st.place_innovator(candidates[i], schedule->product);
    }
  }
  return shortfall;
}

namespace {

void sweep_range(const SimulationState& st, const Network& net, const UtilityProfile& utilities, Temperature t,
                 const OptionModel& opts, std::uint64_t seed, std::vector<StateIndex>& next, AgentId begin,
                 AgentId end) {
  const auto states = st.states();
  const int m = opts.size();
  for (AgentId a = begin; a < end; ++a) {
    const StateIndex current = states[a];
    if (opts.absorbing(current)) continue;
    const auto counts = neighbor_counts(net, states, a, m);
    const double degree = static_cast<double>(net.degree(a));
    const OptionVector<double> field = local_field(counts.cast<double>() / degree, utilities.row(a).transpose());
    const auto p = transition_probabilities(field, t, current, opts);
    RandomStream rng(seed, StreamDomain::kDecision, st.tick(), a);
    next[a] = sample_state(p, rng);
  }
}

}  // namespace

SimulationState step(const SimulationState& st, const Network& net, const UtilityProfile& utilities, Temperature t,
                     const OptionModel& opts, std::uint64_t seed, unsigned threads) {
  if (net.agents() != st.agents()) throw UsageError("network and state sizes differ");
  if (static_cast<std::size_t>(utilities.rows()) != st.agents() || utilities.cols() != opts.size()) {
    throw UsageError("utility profile shape does not match agents x options");
  }
  if (st.options() != opts.size()) throw UsageError("state and option model disagree on M");

  const auto prev = st.states();
  std::vector<StateIndex> next(prev.begin(), prev.end());
  const auto n = static_cast<AgentId>(st.agents());
  threads = std::max(1u, std::min<unsigned>(threads, n));
  if (threads == 1) {
    sweep_range(st, net, utilities, t, opts, seed, next, 0, n);
  } else {
    std::vector<std::jthread> pool;
    const AgentId chunk = (n + threads - 1) / threads;
    for (unsigned i = 0; i < threads; ++i) {
      const AgentId begin = std::min<AgentId>(n, i * chunk);
      const AgentId end = std::min<AgentId>(n, begin + chunk);
      pool.emplace_back([&, begin, end] { sweep_range(st, net, utilities, t, opts, seed, next, begin, end); });
    }
  }

  std::vector<std::size_t> innovators(static_cast<std::size_t>(st.options()));
  for (int k = 0; k < st.options(); ++k) innovators[k] = st.innovators(static_cast<StateIndex>(k));
  return SimulationState(std::move(next), st.options(), st.tick() + 1, std::move(innovators));
}

namespace {

template <typename Same>
std::optional<std::size_t> first_stable_window(std::size_t rows, std::size_t window, std::size_t from_tick,
                                               Same same) {
  if (window < 1) throw UsageError("saturation window must be >= 1");
  std::size_t streak = 0;
  for (std::size_t t = from_tick + 1; t < rows; ++t) {
    streak = same(t - 1, t) ? streak + 1 : 0;
    if (streak >= window) return t;
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::size_t> detect_saturation(const TimeSeries& series, std::size_t window, std::size_t from_tick) {
  return first_stable_window(series.ticks(), window, from_tick,
                             [&](std::size_t a, std::size_t b) { return series.same_counts(a, b); });
}

std::optional<std::size_t> detect_state_saturation(const TimeSeries& series, int state, std::size_t window,
                                                   std::size_t from_tick) {
  return first_stable_window(series.ticks(), window, from_tick, [&](std::size_t a, std::size_t b) {
    return series.count(a, state) == series.count(b, state);
  });
}

namespace {

bool schedules_exhausted(const SimulationState& st, std::span<const InnovatorSchedule> schedules,
                         const OptionModel& opts) {
  const bool no_candidates = st.counts()[opts.non_adoption()] == 0;
  for (const auto& s : schedules) {
    if (st.innovators(s.product) >= s.quota(st.agents())) continue;
    if (st.tick() >= s.start_tick && no_candidates) continue;
    return false;
  }
  return true;
}

}  // namespace

RunResult run(const RunSetup& setup) {
  const auto& opts = setup.options;
  const std::size_t n = setup.network.agents();
  for (const auto& s : setup.schedules) s.validate(opts);
  if (setup.window < 1) throw ConfigError("must be >= 1", "run.saturation_window");
  if (!setup.launch_ticks.empty() && setup.launch_ticks.size() != static_cast<std::size_t>(opts.size())) {
    throw UsageError("launch tick table must have one entry per state");
  }

  auto options_at = [&](std::size_t tick) {
    OptionModel effective = opts;
    for (std::size_t k = 0; k < setup.launch_ticks.size(); ++k) {
      if (tick < setup.launch_ticks[k]) effective = effective.without_target(static_cast<StateIndex>(k));
    }
    return effective;
  };

  SimulationState st(n, opts);
  RunResult result{TimeSeries(n, opts.size()), st, std::nullopt, 0};
  result.series.append(st.counts());

  bool exhausted = schedules_exhausted(st, setup.schedules, opts);
  std::size_t streak = 0;
  bool warned = false;
  while (st.tick() < setup.max_ticks) {
    if (!exhausted) {
      const std::size_t missing = seed_innovators(st, setup.schedules, opts, setup.seed);
      if (missing > 0 && !warned) {
        std::clog << fmt::format("warning: tick {}: {} innovators could not be placed (no non-adopters left)\n",
                                 st.tick(), missing);
        warned = true;
      }
    }
    const bool exhausted_now = schedules_exhausted(st, setup.schedules, opts);
    st = step(st, setup.network, setup.utilities, setup.temperature, options_at(st.tick()), setup.seed,
              setup.threads);
    result.series.append(st.counts());
    const std::size_t row = st.tick();
    if (!exhausted && exhausted_now) {
      exhausted = true;
      result.seeding_complete_tick = row;
      streak = 0;
      continue;
    }
    if (!exhausted) continue;
    streak = result.series.same_counts(row - 1, row) ? streak + 1 : 0;
    if (streak >= setup.window) {
      result.saturation_tick = row;
      break;
    }
  }
  result.final_state = std::move(st);
  return result;
}

}  // namespace potts
