#include "potts/config.hpp"

#include <algorithm>
#include <charconv>
#include <vector>

#include <fmt/format.h>

namespace potts {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw ConfigError(fmt::format("'{}' is not a number", text), std::string(key));
  return v;
}

std::uint64_t to_unsigned(std::string_view key, std::string_view text) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError(fmt::format("'{}' is not a non-negative integer", text), std::string(key));
  }
  return v;
}

HeterogeneityDistribution to_distribution(std::string_view key, std::string_view text) {
  HeterogeneityDistribution dist;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw ConfigError(fmt::format("bucket '{}' is not fraction:delta_u", item), std::string(key));
    }
    dist.buckets.push_back({to_double(key, trim(item.substr(0, colon))), to_double(key, trim(item.substr(colon + 1)))});
  }
  return dist;
}

InnovatorSchedule& schedule_for(Scenario& scn, StateIndex product) {
  for (auto& s : scn.innovators) {
    if (s.product == product) return s;
  }
  scn.innovators.push_back(InnovatorSchedule{product, 125, 0.025, 0});
  std::sort(scn.innovators.begin(), scn.innovators.end(),
            [](const auto& a, const auto& b) { return a.product < b.product; });
  return schedule_for(scn, product);
}

LaunchPlan& launch_plan(Scenario& scn) {
  if (!scn.launch) scn.launch = LaunchPlan{};
  return *scn.launch;
}

void apply_unchecked(Scenario& scn, std::string_view key, std::string_view value) {
  const std::string k(key);
  const auto opts = scn.option_model();

  if (key == "grid.width") {
    scn.grid.width = to_unsigned(key, value);
  } else if (key == "grid.height") {
    scn.grid.height = to_unsigned(key, value);
  } else if (key == "network.p_r") {
    scn.p_r = to_double(key, value);
  } else if (key == "decision.temperature") {
    scn.temperature = to_double(key, value);
  } else if (key == "options.preset") {
    const auto preset = to_unsigned(key, value);
    if (preset != 3 && preset != 4) throw ConfigError(fmt::format("must be 3 or 4, got {}", value), k);
    const auto keep = scn;
    scn = default_scenario(static_cast<OptionPreset>(preset));
    scn.grid = keep.grid;
    scn.p_r = keep.p_r;
    scn.temperature = keep.temperature;
    scn.max_ticks = keep.max_ticks;
    scn.saturation_window = keep.saturation_window;
    scn.seed = keep.seed;
    scn.replications = keep.replications;
  } else if (key == "utilities.distribution") {
    scn.utilities.heterogeneous = to_distribution(key, value);
  } else if (key.starts_with("utilities.")) {
    const std::string label(key.substr(10));
    StateIndex idx = 0;
    try {
      idx = opts.index_of(label);
    } catch (const ConfigError&) {
      throw ConfigError("unknown key", k);
    }
    if (idx == opts.non_adoption()) throw ConfigError("non-adoption utility is anchored at 0", k);
    scn.utilities.homogeneous.at(idx) = to_double(key, value);
  } else if (key.starts_with("innovators.")) {
    const auto rest = key.substr(11);
    const auto dot = rest.rfind('.');
    if (dot == std::string_view::npos) throw ConfigError("unknown key", k);
    const std::string label(rest.substr(0, dot));
    const auto field = rest.substr(dot + 1);
    StateIndex idx = 0;
    try {
      idx = opts.index_of(label);
    } catch (const ConfigError&) {
      throw ConfigError("unknown key", k);
    }
    if (idx == opts.non_adoption()) throw ConfigError("non-adoption has no innovators", k);
    if (field == "rate") {
      schedule_for(scn, idx).rate = to_unsigned(key, value);
    } else if (field == "target_fraction") {
      schedule_for(scn, idx).target_fraction = to_double(key, value);
    } else if (field == "start_tick") {
      schedule_for(scn, idx).start_tick = to_unsigned(key, value);
    } else {
      throw ConfigError("unknown key", k);
    }
  } else if (key == "launch.t_b") {
    launch_plan(scn).t_b = to_unsigned(key, value);
  } else if (key == "launch.tau") {
    launch_plan(scn).tau = to_double(key, value);
  } else if (key == "launch.product") {
    try {
      launch_plan(scn).product = opts.index_of(std::string(value));
    } catch (const ConfigError&) {
      throw ConfigError(fmt::format("unknown state '{}'", value), k);
    }
  } else if (key == "run.max_ticks") {
    scn.max_ticks = to_unsigned(key, value);
  } else if (key == "run.saturation_window") {
    scn.saturation_window = to_unsigned(key, value);
  } else if (key == "run.seed") {
    scn.seed = to_unsigned(key, value);
  } else if (key == "run.replications") {
    scn.replications = to_unsigned(key, value);
  } else {
    throw ConfigError("unknown key", k);
  }
}

}  // namespace

std::pair<std::string, std::string> split_assignment(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) throw ConfigError(fmt::format("expected key=value, got '{}'", text));
  const auto key = trim(text.substr(0, eq));
  const auto value = trim(text.substr(eq + 1));
  if (key.empty()) throw ConfigError(fmt::format("missing key in '{}'", text));
  if (value.empty()) throw ConfigError("missing value", std::string(key));
  return {std::string(key), std::string(value)};
}

Scenario parse_config(std::string_view document) {
  struct Entry {
    std::string key;
    std::string value;
    std::size_t line;
  };
  std::vector<Entry> entries;
  std::size_t line_no = 0;
  while (!document.empty()) {
    ++line_no;
    const auto nl = document.find('\n');
    auto line = document.substr(0, nl);
    document = nl == std::string_view::npos ? std::string_view{} : document.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(fmt::format("expected 'key = value', got '{}'", line), line_no);
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("missing key", line_no);
    if (value.empty()) throw ParseError(fmt::format("missing value for '{}'", key), line_no);
    for (const auto& e : entries) {
      if (e.key == key) throw ParseError(fmt::format("duplicate key '{}' (first on line {})", key, e.line), line_no);
    }
    entries.push_back({std::string(key), std::string(value), line_no});
  }

  Scenario scn = default_scenario(OptionPreset::kThree);
  auto apply = [&](const Entry& e) {
    try {
      apply_unchecked(scn, e.key, e.value);
    } catch (const ConfigError& err) {
      throw ConfigError(fmt::format("line {}: {}", e.line, err.what()), err.key());
    }
  };
  std::stable_partition(entries.begin(), entries.end(), [](const Entry& e) { return e.key == "options.preset"; });
  for (const auto& e : entries) apply(e);
  scn.validate();
  return scn;
}

void apply_setting(Scenario& scn, std::string_view key, std::string_view value) {
  apply_unchecked(scn, trim(key), trim(value));
  scn.validate();
}

std::string emit_config(const Scenario& scn) {
  const auto opts = scn.option_model();
  std::string out;
  auto put = [&out](std::string_view key, const auto& value) { out += fmt::format("{} = {}\n", key, value); };

  put("options.preset", static_cast<int>(scn.options));
  put("grid.width", scn.grid.width);
  put("grid.height", scn.grid.height);
  put("network.p_r", scn.p_r);
  put("decision.temperature", scn.temperature);
  for (int k = 0; k < opts.size(); ++k) {
    if (k == opts.non_adoption()) continue;
    put("utilities." + opts.label(static_cast<StateIndex>(k)), scn.utilities.homogeneous[static_cast<std::size_t>(k)]);
  }
  if (scn.utilities.heterogeneous) {
    std::string dist;
    for (const auto& b : scn.utilities.heterogeneous->buckets) {
      dist += fmt::format("{}{}:{}", dist.empty() ? "" : ", ", b.fraction, b.delta_u);
    }
    put("utilities.distribution", dist);
  }
  // The preset reset re-creates the default A and B schedules; emitting every schedule
  // keeps non-default ones explicit.
  for (const auto& s : scn.innovators) {
    const std::string prefix = "innovators." + opts.label(s.product);
    put(prefix + ".rate", s.rate);
    put(prefix + ".target_fraction", s.target_fraction);
    put(prefix + ".start_tick", s.start_tick);
  }
  if (scn.launch) {
    put("launch.t_b", scn.launch->t_b);
    put("launch.tau", scn.launch->tau);
    put("launch.product", opts.label(scn.launch->product));
  }
  put("run.max_ticks", scn.max_ticks);
  put("run.saturation_window", scn.saturation_window);
  put("run.seed", scn.seed);
  put("run.replications", scn.replications);
  return out;
}

}  // namespace potts
