// potts-diffusion: command-line driver for the multi-option diffusion simulator.
//
//   potts-diffusion run --config FILE [--seed K] [--out DIR]
//   potts-diffusion replicate --config FILE --runs R --out DIR
//   potts-diffusion sweep --config FILE --param KEY --values v1,v2,... --out DIR
//   potts-diffusion preset --name fig1..fig5 [--set key=value ...] --out DIR
//
// Exit status: 0 success, 1 usage or configuration error, 2 runtime error.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "potts/config.hpp"
#include "potts/io.hpp"
#include "potts/scenarios.hpp"

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  std::vector<std::string> sets;
  std::size_t runs = 0;
  std::string param;
  std::vector<std::string> values;
  std::string preset;
  unsigned threads = 1;
  bool dump_network = false;
  bool print_config = false;
};

potts::Scenario load_scenario(const Options& opt) {
  potts::Scenario scn = opt.preset.empty() ? potts::parse_config(potts::read_text_file(opt.config))
                                           : potts::preset(opt.preset);
  for (const auto& s : opt.sets) {
    const auto [key, value] = potts::split_assignment(s);
    potts::apply_setting(scn, key, value);
  }
  if (opt.seed) scn.seed = *opt.seed;
  return scn;
}

void run_single(const potts::Scenario& scn, const Options& opt) {
  const auto setup = potts::materialize(scn, scn.seed, opt.threads);
  potts::ResultBundle bundle{scn, scn.seed, potts::run(setup)};
  potts::write_bundle(bundle, opt.out);
  if (opt.dump_network) {
    std::ostringstream net;
    potts::write_edge_list(net, setup.network, scn.seed, scn.p_r);
    potts::write_text_file(fs::path(opt.out) / "network.txt", net.str());
  }
  const auto& r = bundle.result;
  std::cout << fmt::format("{} ticks, {}\n", r.series.ticks() - 1,
                           r.saturation_tick ? fmt::format("saturated at tick {}", *r.saturation_tick)
                                             : std::string("unsaturated at max_ticks"));
}

void run_replicate(const potts::Scenario& scn, std::size_t runs, const Options& opt) {
  const auto stats = potts::replicate(scn, runs, opt.threads);
  const auto opts = scn.option_model();
  std::ostringstream series;
  potts::write_replicate_series(series, stats, opts);
  potts::write_text_file(fs::path(opt.out) / "replicate.csv", series.str());
  std::ostringstream summary;
  potts::write_replicate_summary(summary, stats, scn);
  potts::write_text_file(fs::path(opt.out) / "replicate_summary.txt", summary.str());
  std::cout << fmt::format("{} runs, {} saturated\n", stats.runs, stats.saturated_runs());
}

void run_sweep(const potts::Scenario& base, const std::string& key, const std::vector<std::string>& values,
               std::size_t runs, const Options& opt) {
  std::vector<potts::SweepRow> rows;
  for (const auto& v : values) {
    potts::Scenario scn = base;
    potts::apply_setting(scn, key, v);
    rows.push_back({v, potts::replicate(scn, runs, opt.threads)});
    std::cout << fmt::format("{} = {}: done\n", key, v);
  }
  std::ostringstream out;
  potts::write_sweep(out, key, rows, base.option_model());
  potts::write_text_file(fs::path(opt.out) / "sweep.csv", out.str());
  potts::write_text_file(fs::path(opt.out) / "config.txt", potts::emit_config(base));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-option innovation diffusion on small-world lattices"};
  app.require_subcommand(1);
  Options opt;

  auto* run = app.add_subcommand("run", "Single run; writes timeseries, landscape, summary");
  run->add_option("--config", opt.config, "Configuration file")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", opt.seed, "Override run.seed");
  run->add_option("--out", opt.out, "Output directory");
  run->add_option("--set", opt.sets, "Override a key: key=value (repeatable)");
  run->add_flag("--dump-network", opt.dump_network, "Also write network.txt");

  auto* rep = app.add_subcommand("replicate", "Repeated runs with consecutive seeds; aggregated curves");
  rep->add_option("--config", opt.config, "Configuration file")->required()->check(CLI::ExistingFile);
  rep->add_option("--runs", opt.runs, "Number of replications (default run.replications)");
  rep->add_option("--out", opt.out, "Output directory")->required();
  rep->add_option("--set", opt.sets, "Override a key: key=value (repeatable)");

  auto* sweep = app.add_subcommand("sweep", "One aggregated result per value of a parameter");
  sweep->add_option("--config", opt.config, "Configuration file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--param", opt.param, "Configuration key to vary")->required();
  sweep->add_option("--values", opt.values, "Comma-separated values")->required()->delimiter(',');
  sweep->add_option("--runs", opt.runs, "Replications per value (default run.replications)");
  sweep->add_option("--out", opt.out, "Output directory")->required();
  sweep->add_option("--set", opt.sets, "Override a key: key=value (repeatable)");

  auto* pre = app.add_subcommand("preset", "Run a figure preset (fig2-fig4 run their sweep)");
  pre->add_option("--name", opt.preset, "fig1..fig5")->required();
  pre->add_option("--set", opt.sets, "Override a key: key=value (repeatable)");
  pre->add_option("--runs", opt.runs, "Replications (default run.replications)");
  pre->add_option("--out", opt.out, "Output directory");
  pre->add_flag("--print-config", opt.print_config, "Print the preset configuration and exit");

  for (auto* sub : {run, rep, sweep, pre}) {
    sub->add_option("--threads", opt.threads, "Worker threads (results do not depend on this)")
        ->check(CLI::Range(1u, 256u));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const potts::Scenario scn = load_scenario(opt);
    const std::size_t runs = opt.runs > 0 ? opt.runs : scn.replications;
    if (*run) {
      run_single(scn, opt);
    } else if (*rep) {
      run_replicate(scn, runs, opt);
    } else if (*sweep) {
      run_sweep(scn, opt.param, opt.values, runs, opt);
    } else if (opt.print_config) {
      std::cout << potts::emit_config(scn);
    } else if (const auto design = potts::preset_sweep(opt.preset); design) {
      bool overridden = false;
      for (const auto& s : opt.sets) overridden |= potts::split_assignment(s).first == design->key;
      if (overridden) {
        run_single(scn, opt);
      } else {
        run_sweep(scn, design->key, design->values, runs, opt);
      }
    } else if (runs > 1) {
      run_single(scn, opt);
      run_replicate(scn, runs, opt);
    } else {
      run_single(scn, opt);
    }
  } catch (const potts::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 1;
  } catch (const potts::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 1;
  } catch (const potts::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
