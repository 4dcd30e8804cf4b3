#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "potts/decision.hpp"
#include "potts/network.hpp"

namespace potts {

/// Per-agent utilities, one row per agent, one column per state.
using UtilityProfile = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Linear innovator seeding for one product: `rate` agents per tick from `start_tick` on,
/// until floor(target_fraction * N) have been placed.
struct InnovatorSchedule {
  StateIndex product = 0;
  std::size_t rate = 125;
  double target_fraction = 0.025;
  std::size_t start_tick = 0;

  std::size_t quota(std::size_t agents) const noexcept;
  void validate(const OptionModel& opts) const;

  friend bool operator==(const InnovatorSchedule&, const InnovatorSchedule&) = default;
};

class SimulationState {
 public:
  /// Everyone starts in the non-adoption state at tick 0.
  SimulationState(std::size_t agents, const OptionModel& opts);
  SimulationState(std::vector<StateIndex> states, int options, std::size_t tick = 0,
                  std::vector<std::size_t> innovators = {});

  std::size_t tick() const noexcept { return tick_; }
  std::span<const StateIndex> states() const noexcept { return states_; }
  StateIndex state(AgentId agent) const { return states_.at(agent); }
  std::span<const std::int64_t> counts() const noexcept { return counts_; }
  int options() const noexcept { return static_cast<int>(counts_.size()); }
  std::size_t agents() const noexcept { return states_.size(); }

  /// Innovators placed so far for `product`.
  std::size_t innovators(StateIndex product) const { return innovators_.at(product); }

  void set_state(AgentId agent, StateIndex state);
  /// set_state plus innovator bookkeeping for `product`.
  void place_innovator(AgentId agent, StateIndex product);

 private:
  std::size_t tick_ = 0;
  std::vector<StateIndex> states_;
  std::vector<std::int64_t> counts_;
  std::vector<std::size_t> innovators_;
};

/// Per-tick state counts; fractions are counts / N.
class TimeSeries {
 public:
  TimeSeries(std::size_t agents, int options) : agents_(agents), options_(options) {}

  void append(std::span<const std::int64_t> counts);

  std::size_t ticks() const noexcept { return counts_.size() / static_cast<std::size_t>(options_); }
  int options() const noexcept { return options_; }
  std::size_t agents() const noexcept { return agents_; }

  std::int64_t count(std::size_t tick, int state) const;
  double fraction(std::size_t tick, int state) const;
  OptionVector<double> row(std::size_t tick) const;
  bool same_counts(std::size_t a, std::size_t b) const;

  /// ticks() x options() matrix of fractions.
  Eigen::MatrixXd fractions() const;

 private:
  std::size_t agents_;
  int options_;
  std::vector<std::int64_t> counts_;
};

/// Places this tick's innovators. Schedules run in product-index order; each one whose
/// start_tick <= tick and whose quota is unfilled converts min(rate, remaining) agents drawn
/// uniformly without replacement from the current non-adopters.
///
/// Stream: (seed, kInnovators, tick, product). Candidates are the non-adopters in ascending
/// index order; a partial Fisher-Yates shuffle with `bounded` draws picks the winners.
///
/// Returns the number of requested innovators that could not be placed because non-adopters ran out.
std::size_t seed_innovators(SimulationState& st, std::span<const InnovatorSchedule> schedules,
                            const OptionModel& opts, std::uint64_t seed);

/// One synchronous sweep. Each agent whose state is not absorbing under `opts` reads its contacts
/// from `st` (never from the array being written), builds its field from its own utility row, and
/// samples its next state with one uniform01 draw from stream (seed, kDecision, tick, agent).
/// The result is identical for every `threads` value.
SimulationState step(const SimulationState& st, const Network& net, const UtilityProfile& utilities, Temperature t,
                     const OptionModel& opts, std::uint64_t seed, unsigned threads = 1);

/// First tick t0 + window (t0 >= from_tick) such that rows t0..t0+window are identical.
std::optional<std::size_t> detect_saturation(const TimeSeries& series, std::size_t window, std::size_t from_tick = 0);

/// Same rule restricted to one state's column.
std::optional<std::size_t> detect_state_saturation(const TimeSeries& series, int state, std::size_t window,
                                                   std::size_t from_tick = 0);

/// Everything a run needs once the scenario has been materialised.
struct RunSetup {
  Network network;
  UtilityProfile utilities;
  OptionModel options = OptionModel::three_option();
  Temperature temperature{0.0};
  std::vector<InnovatorSchedule> schedules;
  /// Per-state tick before which transitions into that state are removed (empty = all 0).
  std::vector<std::size_t> launch_ticks;
  std::size_t max_ticks = 500;
  std::size_t window = 5;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct RunResult {
  TimeSeries series;
  SimulationState final_state;
  std::optional<std::size_t> saturation_tick;
  /// First series row after which no innovator can be placed any more.
  std::size_t seeding_complete_tick = 0;

  bool saturated() const noexcept { return saturation_tick.has_value(); }
};

/// Row 0 is the initial state. Each loop iteration seeds innovators at the current tick, steps,
/// and records the new row, until saturation is detected (counting only rows from
/// seeding_complete_tick on) or max_ticks steps have run.
RunResult run(const RunSetup& setup);

}  // namespace potts
