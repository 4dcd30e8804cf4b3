#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "potts/decision.hpp"
#include "potts/network.hpp"
#include "potts/random.hpp"
#include "potts/simulation.hpp"

namespace potts {

struct HeterogeneityBucket {
  double fraction = 0.0;
  double delta_u = 0.0;

  friend bool operator==(const HeterogeneityBucket&, const HeterogeneityBucket&) = default;
};

/// Population split over utility levels. Bucket sizes are floor(fraction * N); the remainder
/// goes to the bucket with the largest fraction (the first one on ties). Agents are then
/// assigned by a seeded shuffle.
struct HeterogeneityDistribution {
  std::vector<HeterogeneityBucket> buckets;

  void validate() const;
  std::vector<std::size_t> bucket_sizes(std::size_t agents) const;
  double mean() const;

  friend bool operator==(const HeterogeneityDistribution&, const HeterogeneityDistribution&) = default;
};

/// Delayed launch of one product whose utility improves while it waits.
struct LaunchPlan {
  std::size_t t_b = 0;
  double tau = 20.0 / 3.0;
  StateIndex product = 1;

  void validate(const OptionModel& opts) const;

  friend bool operator==(const LaunchPlan&, const LaunchPlan&) = default;
};

/// Utility levels relative to non-adoption. `homogeneous` has one entry per state (the
/// non-adoption entry is 0). When `heterogeneous` is set, every adoption state of an agent
/// takes that agent's bucket value instead.
struct UtilitySpec {
  std::vector<double> homogeneous;
  std::optional<HeterogeneityDistribution> heterogeneous;

  friend bool operator==(const UtilitySpec&, const UtilitySpec&) = default;
};

enum class OptionPreset { kThree = 3, kFour = 4 };

OptionModel make_option_model(OptionPreset preset);

struct Scenario {
  GridSpec grid;
  double p_r = 0.0;
  double temperature = 0.0;
  OptionPreset options = OptionPreset::kThree;
  UtilitySpec utilities;
  std::vector<InnovatorSchedule> innovators;
  std::optional<LaunchPlan> launch;
  std::size_t max_ticks = 500;
  std::size_t saturation_window = 5;
  std::uint64_t seed = 1;
  std::size_t replications = 1;

  OptionModel option_model() const { return make_option_model(options); }

  /// Throws ConfigError naming the first offending key.
  void validate() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Defaults for an option preset: 3 options -> A = B = 0.6; 4 options -> (0.7, 0.65, 0.6).
/// Products A and B are seeded at 125 per tick up to 2.5 % each.
Scenario default_scenario(OptionPreset preset = OptionPreset::kThree);

/// du_B = du_A + (1 - du_A) tanh(t_B / tau).
double improved_utility(double delta_u_a, double t_b, double tau);

/// Per-agent utility rows. With a launch plan, the delayed product's column becomes
/// improved_utility(agent's column-0 utility, t_b, tau).
/// The heterogeneous shuffle draws from `rng` (Fisher-Yates from the last index down).
UtilityProfile assign_utilities(const UtilitySpec& spec, const std::optional<LaunchPlan>& launch, std::size_t agents,
                                int options, RandomStream& rng);

/// (A, B, AB, 0) utilities for the four-option model.
OptionVector<double> four_option_utilities(double du_a0, double du_b0, double du_ab0);

/// Network, utilities and schedules for one replication of `scn` with master seed `seed`.
RunSetup materialize(const Scenario& scn, std::uint64_t seed, unsigned threads = 1);

/// Single run with the scenario's own seed.
RunResult run(const Scenario& scn, unsigned threads = 1);

struct PresetVariant {
  std::optional<GridSpec> grid;
  std::optional<double> p_r;
  std::optional<double> temperature;
  std::optional<std::size_t> gamma_b;
  std::optional<std::size_t> t_b;
};

/// fig1..fig5 experiment designs on a 200 x 200 grid unless overridden.
Scenario preset(std::string_view name, const PresetVariant& variant = {});

/// The parameter each figure sweeps, if any: fig2 -> innovators.B.rate {125, 250, 500, 1000},
/// fig3/fig4 -> launch.t_b {0..8}.
struct PresetSweep {
  std::string key;
  std::vector<std::string> values;
};
std::optional<PresetSweep> preset_sweep(std::string_view name);

struct ReplicateStats {
  std::size_t runs = 0;
  /// ticks x M, aligned by tick; shorter runs padded with their last row.
  Eigen::MatrixXd mean;
  Eigen::MatrixXd stddev;
  /// Final-row shares per run (runs x M).
  Eigen::MatrixXd final_shares;
  Eigen::VectorXd final_mean;
  Eigen::VectorXd final_stddev;
  std::vector<std::optional<std::size_t>> saturation_ticks;
  /// Per run: first tick at which the non-adoption share is frozen for a window.
  std::vector<std::optional<std::size_t>> non_adoption_freeze_ticks;

  std::size_t saturated_runs() const;
  /// Mean over saturated runs; NaN when none saturated.
  double mean_saturation_tick() const;
  double mean_non_adoption_freeze_tick() const;
};

/// Runs seeds seed, seed + 1, ..., seed + n_runs - 1. With threads > 1 the replications run
/// concurrently; aggregation order is by seed, so results do not depend on `threads`.
ReplicateStats replicate(const Scenario& scn, std::size_t n_runs, unsigned threads = 1);

}  // namespace potts
