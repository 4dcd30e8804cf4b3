#include "potts/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include <fmt/format.h>

namespace potts {

namespace {

void require_unit(double v, const std::string& key) {
  if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(fmt::format("must lie in [0, 1], got {}", v), key);
}

}  // namespace

void HeterogeneityDistribution::validate() const {
  if (buckets.empty()) throw ConfigError("needs at least one bucket", "utilities.distribution");
  double total = 0.0;
  for (const auto& b : buckets) {
    if (!(b.fraction > 0.0 && b.fraction <= 1.0)) {
      throw ConfigError(fmt::format("bucket fraction {} outside (0, 1]", b.fraction), "utilities.distribution");
    }
    require_unit(b.delta_u, "utilities.distribution");
    total += b.fraction;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ConfigError(fmt::format("fractions sum to {}, not 1", total), "utilities.distribution");
  }
}

std::vector<std::size_t> HeterogeneityDistribution::bucket_sizes(std::size_t agents) const {
  std::vector<std::size_t> sizes;
  std::size_t assigned = 0;
  std::size_t largest = 0;
  for (std::size_t i = 0; i < buckets.size(); ++i) {
    sizes.push_back(static_cast<std::size_t>(std::floor(buckets[i].fraction * static_cast<double>(agents))));
    assigned += sizes.back();
    if (buckets[i].fraction > buckets[largest].fraction) largest = i;
  }
  sizes[largest] += agents - assigned;
  return sizes;
}

double HeterogeneityDistribution::mean() const {
  double m = 0.0;
  for (const auto& b : buckets) m += b.fraction * b.delta_u;
  return m;
}

void LaunchPlan::validate(const OptionModel& opts) const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError(fmt::format("must be > 0, got {}", tau), "launch.tau");
  if (product == 0 || product >= opts.size() || product == opts.non_adoption()) {
    throw ConfigError("delayed product must be an adoption state other than the first", "launch.product");
  }
}

OptionModel make_option_model(OptionPreset preset) {
  return preset == OptionPreset::kFour ? OptionModel::four_option() : OptionModel::three_option();
}

void Scenario::validate() const {
  grid.validate();
  RewiringProbability{p_r};
  Temperature{temperature};
  const auto opts = option_model();
  const auto m = static_cast<std::size_t>(opts.size());

  if (utilities.homogeneous.size() != m) throw ConfigError("one value per state required", "utilities");
  for (std::size_t k = 0; k < m; ++k) {
    const std::string key = "utilities." + opts.label(static_cast<StateIndex>(k));
    if (k == opts.non_adoption()) {
      if (utilities.homogeneous[k] != 0.0) throw ConfigError("non-adoption utility is anchored at 0", key);
      continue;
    }
    require_unit(utilities.homogeneous[k], key);
  }
  if (utilities.heterogeneous) utilities.heterogeneous->validate();

  std::vector<bool> seen(m, false);
  for (const auto& s : innovators) {
    s.validate(opts);
    if (seen[s.product]) throw ConfigError("duplicate schedule for " + opts.label(s.product), "innovators");
    seen[s.product] = true;
  }
  if (launch) launch->validate(opts);
  if (saturation_window < 1) throw ConfigError("must be >= 1", "run.saturation_window");
  if (replications < 1) throw ConfigError("must be >= 1", "run.replications");
}

Scenario default_scenario(OptionPreset preset) {
  Scenario scn;
  scn.options = preset;
  if (preset == OptionPreset::kFour) {
    const auto u = four_option_utilities(0.7, 0.65, 0.6);
    scn.utilities.homogeneous.assign(u.data(), u.data() + u.size());
  } else {
    scn.utilities.homogeneous = {0.6, 0.6, 0.0};
  }
  scn.innovators = {InnovatorSchedule{0, 125, 0.025, 0}, InnovatorSchedule{1, 125, 0.025, 0}};
  return scn;
}

double improved_utility(double delta_u_a, double t_b, double tau) {
  require_unit(delta_u_a, "launch.base_utility");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError(fmt::format("must be > 0, got {}", tau), "launch.tau");
  if (!(t_b >= 0.0)) throw ConfigError(fmt::format("must be >= 0, got {}", t_b), "launch.t_b");
  return delta_u_a + (1.0 - delta_u_a) * std::tanh(t_b / tau);
}

UtilityProfile assign_utilities(const UtilitySpec& spec, const std::optional<LaunchPlan>& launch, std::size_t agents,
                                int options, RandomStream& rng) {
  const auto m = static_cast<std::size_t>(options);
  if (spec.homogeneous.size() != m) throw ConfigError("one value per state required", "utilities");
  const auto non_adoption = static_cast<Eigen::Index>(m - 1);

  UtilityProfile profile(static_cast<Eigen::Index>(agents), options);
  const Eigen::Map<const Eigen::RowVectorXd> base(spec.homogeneous.data(), options);
  profile.rowwise() = base;

  if (spec.heterogeneous) {
    spec.heterogeneous->validate();
    std::vector<double> level;
    level.reserve(agents);
    const auto sizes = spec.heterogeneous->bucket_sizes(agents);
    for (std::size_t b = 0; b < sizes.size(); ++b) level.insert(level.end(), sizes[b], spec.heterogeneous->buckets[b].delta_u);
    for (std::size_t i = agents; i > 1; --i) {
      const auto j = static_cast<std::size_t>(rng.bounded(i));
      std::swap(level[i - 1], level[j]);
    }
    for (std::size_t a = 0; a < agents; ++a) {
      auto row = profile.row(static_cast<Eigen::Index>(a));
      row.head(non_adoption).setConstant(level[a]);
    }
  }

  if (launch) {
    const auto col = static_cast<Eigen::Index>(launch->product);
    if (col <= 0 || col >= non_adoption) throw ConfigError("delayed product must be an adoption state", "launch.product");
    for (Eigen::Index a = 0; a < profile.rows(); ++a) {
      profile(a, col) = improved_utility(profile(a, 0), static_cast<double>(launch->t_b), launch->tau);
    }
  }
  profile.col(non_adoption).setZero();
  return profile;
}

OptionVector<double> four_option_utilities(double du_a0, double du_b0, double du_ab0) {
  require_unit(du_a0, "utilities.A");
  require_unit(du_b0, "utilities.B");
  require_unit(du_ab0, "utilities.AB");
  OptionVector<double> u(4);
  u << du_a0, du_b0, du_ab0, 0.0;
  return u;
}

RunSetup materialize(const Scenario& scn, std::uint64_t seed, unsigned threads) {
  scn.validate();
  const auto opts = scn.option_model();
  RunSetup setup;
  Network lattice = build_moore_lattice(scn.grid);
  setup.network = scn.p_r > 0.0 ? rewire(lattice, RewiringProbability{scn.p_r}, seed) : std::move(lattice);
  RandomStream utility_rng(seed, StreamDomain::kUtilities);
  setup.utilities = assign_utilities(scn.utilities, scn.launch, scn.grid.agents(), opts.size(), utility_rng);
  setup.options = opts;
  setup.temperature = Temperature{scn.temperature};
  setup.schedules = scn.innovators;
  if (scn.launch) {
    setup.launch_ticks.assign(static_cast<std::size_t>(opts.size()), 0);
    setup.launch_ticks[scn.launch->product] = scn.launch->t_b;
    for (auto& s : setup.schedules) {
      if (s.product == scn.launch->product) s.start_tick = std::max(s.start_tick, scn.launch->t_b);
    }
  }
  setup.max_ticks = scn.max_ticks;
  setup.window = scn.saturation_window;
  setup.seed = seed;
  setup.threads = threads;
  return setup;
}

RunResult run(const Scenario& scn, unsigned threads) { return run(materialize(scn, scn.seed, threads)); }

Scenario preset(std::string_view name, const PresetVariant& variant) {
  Scenario scn;
  if (name == "fig1" || name == "fig2") {
    scn = default_scenario(OptionPreset::kThree);
    if (name == "fig2") scn.innovators[1].rate = variant.gamma_b.value_or(1000);
  } else if (name == "fig3" || name == "fig4") {
    scn = default_scenario(OptionPreset::kThree);
    if (name == "fig4") {
      scn.utilities.heterogeneous = HeterogeneityDistribution{{{0.4, 0.6}, {0.4, 0.7}, {0.2, 0.4}}};
    }
    scn.launch = LaunchPlan{variant.t_b.value_or(0), 20.0 / 3.0, 1};
  } else if (name == "fig5") {
    scn = default_scenario(OptionPreset::kFour);
  } else {
    throw UsageError(fmt::format("unknown preset '{}' (expected fig1..fig5)", name));
  }
  if (variant.grid) scn.grid = *variant.grid;
  if (variant.p_r) scn.p_r = *variant.p_r;
  if (variant.temperature) scn.temperature = *variant.temperature;
  scn.validate();
  return scn;
}

std::optional<PresetSweep> preset_sweep(std::string_view name) {
  if (name == "fig2") return PresetSweep{"innovators.B.rate", {"125", "250", "500", "1000"}};
  if (name == "fig3" || name == "fig4") {
    PresetSweep sweep{"launch.t_b", {}};
    for (int t = 0; t <= 8; ++t) sweep.values.push_back(std::to_string(t));
    return sweep;
  }
  return std::nullopt;
}

std::size_t ReplicateStats::saturated_runs() const {
  return static_cast<std::size_t>(
      std::count_if(saturation_ticks.begin(), saturation_ticks.end(), [](const auto& t) { return t.has_value(); }));
}

namespace {

double mean_of_present(const std::vector<std::optional<std::size_t>>& ticks) {
  double total = 0.0;
  std::size_t n = 0;
  for (const auto& t : ticks) {
    if (!t) continue;
    total += static_cast<double>(*t);
    ++n;
  }
  return n == 0 ? std::numeric_limits<double>::quiet_NaN() : total / static_cast<double>(n);
}

}  // namespace

double ReplicateStats::mean_saturation_tick() const { return mean_of_present(saturation_ticks); }

double ReplicateStats::mean_non_adoption_freeze_tick() const { return mean_of_present(non_adoption_freeze_ticks); }

ReplicateStats replicate(const Scenario& scn, std::size_t n_runs, unsigned threads) {
  if (n_runs < 1) throw ConfigError("must be >= 1", "run.replications");
  scn.validate();
  const int m = scn.option_model().size();
  const int non_adoption = m - 1;

  std::vector<std::optional<RunResult>> results(n_runs);
  auto run_one = [&](std::size_t r) { results[r] = run(materialize(scn, scn.seed + r, 1)); };
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_runs)));
  if (workers == 1) {
    for (std::size_t r = 0; r < n_runs; ++r) run_one(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t r = next++; r < n_runs; r = next++) run_one(r);
      });
    }
  }

  ReplicateStats stats;
  stats.runs = n_runs;
  std::size_t ticks = 0;
  for (const auto& r : results) ticks = std::max(ticks, r->series.ticks());

  const auto rows = static_cast<Eigen::Index>(ticks);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(rows, m);
  Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(rows, m);
  stats.final_shares.resize(static_cast<Eigen::Index>(n_runs), m);
  for (std::size_t r = 0; r < n_runs; ++r) {
    const auto& res = *results[r];
    const Eigen::MatrixXd f = res.series.fractions();
    const auto have = f.rows();
    Eigen::MatrixXd padded(rows, m);
    padded.topRows(have) = f;
    if (have < rows) padded.bottomRows(rows - have).rowwise() = f.row(have - 1);
    sum += padded;
    sum_sq += padded.cwiseProduct(padded);
    stats.final_shares.row(static_cast<Eigen::Index>(r)) = f.row(have - 1);
    stats.saturation_ticks.push_back(res.saturation_tick);
    stats.non_adoption_freeze_ticks.push_back(
        detect_state_saturation(res.series, non_adoption, scn.saturation_window, res.seeding_complete_tick));
  }

  const double n = static_cast<double>(n_runs);
  stats.mean = sum / n;
  if (n_runs > 1) {
    stats.stddev = ((sum_sq - n * stats.mean.cwiseProduct(stats.mean)) / (n - 1.0)).cwiseMax(0.0).cwiseSqrt();
  } else {
    stats.stddev = Eigen::MatrixXd::Zero(rows, m);
  }
  stats.final_mean = stats.final_shares.colwise().mean().transpose();
  if (n_runs > 1) {
    const Eigen::MatrixXd centered = stats.final_shares.rowwise() - stats.final_mean.transpose();
    stats.final_stddev = (centered.colwise().squaredNorm() / (n - 1.0)).cwiseSqrt().transpose();
  } else {
    stats.final_stddev = Eigen::VectorXd::Zero(m);
  }
  return stats;
}

}  // namespace potts
