#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "potts/decision.hpp"
#include "potts/network.hpp"
#include "potts/scenarios.hpp"
#include "potts/simulation.hpp"

namespace potts {

inline constexpr const char* kArtifactVersion = "1.0.0";

/// "tick,n_A,n_B[,n_AB],n_0" then one row per tick, fractions with 6 decimals.
void write_timeseries(std::ostream& out, const TimeSeries& series, const OptionModel& opts);
void write_timeseries(const TimeSeries& series, const OptionModel& opts, const std::filesystem::path& path);

/// "# width height tick" then one line per lattice row of space-separated state digits.
void write_landscape(std::ostream& out, std::span<const StateIndex> states, const GridSpec& grid, std::size_t tick);
void write_landscape(std::span<const StateIndex> states, const GridSpec& grid, std::size_t tick,
                     const std::filesystem::path& path);

struct Landscape {
  GridSpec grid;
  std::size_t tick = 0;
  std::vector<StateIndex> states;
};

/// Throws ParseError on malformed headers, ragged rows or non-digit cells.
Landscape read_landscape(std::istream& in);
Landscape read_landscape(const std::filesystem::path& path);

/// Single-run output: timeseries.csv, landscape.txt, summary.txt, config.txt.
struct ResultBundle {
  Scenario scenario;
  std::uint64_t seed = 0;
  RunResult result;
};

/// "key = value" summary: version, seed, ticks, saturation, final shares (6 decimals, equal to
/// the last time-series row) and the full configuration under "config.".
void write_summary(std::ostream& out, const ResultBundle& bundle);
void write_bundle(const ResultBundle& bundle, const std::filesystem::path& dir);

/// "tick,mean_n_A,sd_n_A,..." aggregated curves.
void write_replicate_series(std::ostream& out, const ReplicateStats& stats, const OptionModel& opts);
void write_replicate_summary(std::ostream& out, const ReplicateStats& stats, const Scenario& scn);

struct SweepRow {
  std::string value;
  ReplicateStats stats;
};

/// One row per swept value, in the given order:
/// "<key>,n_A,...,n_0,sd_n_A,...,sd_n_0,saturation_tick,saturated_runs,runs".
void write_sweep(std::ostream& out, const std::string& key, std::span<const SweepRow> rows, const OptionModel& opts);

/// Writes `text` to `path`, creating parent directories. Throws IoError.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace potts
