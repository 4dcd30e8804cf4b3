#include "potts/io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "potts/config.hpp"

namespace potts {

namespace {

template <typename Writer>
void write_via(const std::filesystem::path& path, Writer&& writer) {
  std::ostringstream buffer;
  writer(buffer);
  write_text_file(path, buffer.str());
}

std::string fixed6(double v) { return fmt::format("{:.6f}", v); }

}  // namespace

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_timeseries(std::ostream& out, const TimeSeries& series, const OptionModel& opts) {
  if (series.options() != opts.size()) throw UsageError("series and option model disagree on M");
  out << "tick";
  for (const auto& label : opts.labels()) out << ",n_" << label;
  out << '\n';
  for (std::size_t t = 0; t < series.ticks(); ++t) {
    out << t;
    for (int k = 0; k < series.options(); ++k) out << ',' << fixed6(series.fraction(t, k));
    out << '\n';
  }
}

void write_timeseries(const TimeSeries& series, const OptionModel& opts, const std::filesystem::path& path) {
  write_via(path, [&](std::ostream& out) { write_timeseries(out, series, opts); });
}

void write_landscape(std::ostream& out, std::span<const StateIndex> states, const GridSpec& grid, std::size_t tick) {
  if (states.size() != grid.agents()) throw UsageError("state array length does not match grid");
  fmt::print(out, "# {} {} {}\n", grid.width, grid.height, tick);
  std::string line;
  for (std::size_t r = 0; r < grid.height; ++r) {
    line.clear();
    for (std::size_t c = 0; c < grid.width; ++c) {
      if (c > 0) line += ' ';
      line += static_cast<char>('0' + states[r * grid.width + c]);
    }
    line += '\n';
    out << line;
  }
}

void write_landscape(std::span<const StateIndex> states, const GridSpec& grid, std::size_t tick,
                     const std::filesystem::path& path) {
  write_via(path, [&](std::ostream& out) { write_landscape(out, states, grid, tick); });
}

Landscape read_landscape(std::istream& in) {
  Landscape land;
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty landscape file", 1);
  {
    std::istringstream header(line);
    std::string hash;
    if (!(header >> hash >> land.grid.width >> land.grid.height >> land.tick) || hash != "#") {
      throw ParseError("expected header '# width height tick'", 1);
    }
  }
  land.states.reserve(land.grid.agents());
  std::size_t row = 0;
  while (std::getline(in, line)) {
    const std::size_t line_no = row + 2;
    if (row >= land.grid.height) throw ParseError("more rows than the header declares", line_no);
    std::istringstream cells(line);
    std::string cell;
    std::size_t cols = 0;
    while (cells >> cell) {
      if (cell.size() != 1 || cell[0] < '0' || cell[0] > '9') throw ParseError("cell '" + cell + "' is not a digit", line_no);
      land.states.push_back(static_cast<StateIndex>(cell[0] - '0'));
      ++cols;
    }
    if (cols != land.grid.width) {
      throw ParseError(fmt::format("row has {} cells, expected {}", cols, land.grid.width), line_no);
    }
    ++row;
  }
  if (row != land.grid.height) throw ParseError(fmt::format("found {} rows, expected {}", row, land.grid.height), row + 1);
  return land;
}

Landscape read_landscape(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  return read_landscape(in);
}

void write_summary(std::ostream& out, const ResultBundle& bundle) {
  const auto opts = bundle.scenario.option_model();
  const auto& series = bundle.result.series;
  const std::size_t last = series.ticks() - 1;
  fmt::print(out, "version = {}\n", kArtifactVersion);
  fmt::print(out, "seed = {}\n", bundle.seed);
  fmt::print(out, "agents = {}\n", series.agents());
  fmt::print(out, "final_tick = {}\n", last);
  fmt::print(out, "saturated = {}\n", bundle.result.saturated() ? "true" : "false");
  fmt::print(out, "saturation_tick = {}\n",
             bundle.result.saturation_tick ? std::to_string(*bundle.result.saturation_tick) : "none");
  fmt::print(out, "seeding_complete_tick = {}\n", bundle.result.seeding_complete_tick);
  for (int k = 0; k < opts.size(); ++k) {
    fmt::print(out, "share.{} = {}\n", opts.label(static_cast<StateIndex>(k)), fixed6(series.fraction(last, k)));
  }
  std::istringstream config(emit_config(bundle.scenario));
  std::string line;
  while (std::getline(config, line)) out << "config." << line << '\n';
}

void write_bundle(const ResultBundle& bundle, const std::filesystem::path& dir) {
  const auto opts = bundle.scenario.option_model();
  write_timeseries(bundle.result.series, opts, dir / "timeseries.csv");
  write_landscape(bundle.result.final_state.states(), bundle.scenario.grid, bundle.result.final_state.tick(),
                  dir / "landscape.txt");
  write_via(dir / "summary.txt", [&](std::ostream& out) { write_summary(out, bundle); });
  Scenario echo = bundle.scenario;
  echo.seed = bundle.seed;
  write_text_file(dir / "config.txt", emit_config(echo));
}

void write_replicate_series(std::ostream& out, const ReplicateStats& stats, const OptionModel& opts) {
  out << "tick";
  for (const auto& label : opts.labels()) out << ",mean_n_" << label << ",sd_n_" << label;
  out << '\n';
  for (Eigen::Index t = 0; t < stats.mean.rows(); ++t) {
    out << t;
    for (Eigen::Index k = 0; k < stats.mean.cols(); ++k) {
      out << ',' << fixed6(stats.mean(t, k)) << ',' << fixed6(stats.stddev(t, k));
    }
    out << '\n';
  }
}

namespace {

std::string tick_or_none(double v) { return std::isnan(v) ? "none" : fmt::format("{:.3f}", v); }

}  // namespace

void write_replicate_summary(std::ostream& out, const ReplicateStats& stats, const Scenario& scn) {
  const auto opts = scn.option_model();
  fmt::print(out, "version = {}\n", kArtifactVersion);
  fmt::print(out, "runs = {}\n", stats.runs);
  fmt::print(out, "first_seed = {}\n", scn.seed);
  fmt::print(out, "saturated_runs = {}\n", stats.saturated_runs());
  fmt::print(out, "mean_saturation_tick = {}\n", tick_or_none(stats.mean_saturation_tick()));
  fmt::print(out, "mean_non_adoption_freeze_tick = {}\n", tick_or_none(stats.mean_non_adoption_freeze_tick()));
  for (int k = 0; k < opts.size(); ++k) {
    const auto& label = opts.label(static_cast<StateIndex>(k));
    fmt::print(out, "share.{} = {}\n", label, fixed6(stats.final_mean[k]));
    fmt::print(out, "sd_share.{} = {}\n", label, fixed6(stats.final_stddev[k]));
  }
  std::istringstream config(emit_config(scn));
  std::string line;
  while (std::getline(config, line)) out << "config." << line << '\n';
}

void write_sweep(std::ostream& out, const std::string& key, std::span<const SweepRow> rows, const OptionModel& opts) {
  out << key;
  for (const auto& label : opts.labels()) out << ",n_" << label;
  for (const auto& label : opts.labels()) out << ",sd_n_" << label;
  out << ",saturation_tick,saturated_runs,runs\n";
  for (const auto& row : rows) {
    out << row.value;
    for (Eigen::Index k = 0; k < row.stats.final_mean.size(); ++k) out << ',' << fixed6(row.stats.final_mean[k]);
    for (Eigen::Index k = 0; k < row.stats.final_stddev.size(); ++k) out << ',' << fixed6(row.stats.final_stddev[k]);
    const double sat = row.stats.mean_saturation_tick();
    out << ',' << (std::isnan(sat) ? std::string("none") : fmt::format("{:.3f}", sat)) << ','
        << row.stats.saturated_runs() << ',' << row.stats.runs << '\n';
  }
}

}  // namespace potts
