#include "doctest.h"

#include <numeric>
#include <vector>

#include "potts/scenarios.hpp"
#include "potts/simulation.hpp"

using namespace potts;

namespace {

UtilityProfile homogeneous(std::size_t n, std::initializer_list<double> u) {
  UtilityProfile p(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(u.size()));
  Eigen::Index k = 0;
  for (double x : u) p.col(k++).setConstant(x);
  return p;
}

// Two-buffer reference sweep written independently of step(): read only `prev`, write only `next`.
std::vector<StateIndex> reference_step(const std::vector<StateIndex>& prev, std::size_t tick, const Network& net,
                                       const UtilityProfile& u, Temperature t, const OptionModel& opts,
                                       std::uint64_t seed) {
  std::vector<StateIndex> next = prev;
  const int m = opts.size();
  for (AgentId a = 0; a < prev.size(); ++a) {
    if (opts.absorbing(prev[a])) continue;
    OptionVector<double> field(m);
    for (int k = 0; k < m; ++k) {
      int c = 0;
      for (AgentId b : net.contacts(a)) c += prev[b] == k;
      field[k] = static_cast<double>(c) / static_cast<double>(net.degree(a)) + u(a, k);
    }
    const auto p = transition_probabilities(field, t, prev[a], opts);
    RandomStream rng(seed, StreamDomain::kDecision, tick, a);
    next[a] = sample_state(p, rng);
  }
  return next;
}

}  // namespace

TEST_CASE("innovator seeding: 1000 innovators over 8 ticks at rate 125") {
  const auto opts = OptionModel::three_option();
  SimulationState st(40000, opts);
  const std::vector<InnovatorSchedule> schedules{{0, 125, 0.025, 0}};
  CHECK(schedules[0].quota(40000) == 1000);
  for (int tick = 0; tick < 10; ++tick) {
    CHECK(seed_innovators(st, schedules, opts, 1) == 0);
    const std::size_t expected = std::min<std::size_t>(1000, 125 * static_cast<std::size_t>(tick + 1));
    CHECK(st.innovators(0) == expected);
    CHECK(st.counts()[0] == static_cast<std::int64_t>(expected));
    st = SimulationState(std::vector<StateIndex>(st.states().begin(), st.states().end()), 3, st.tick() + 1,
                         {st.innovators(0), st.innovators(1), st.innovators(2)});
  }
}

TEST_CASE("innovator seeding: rate 1000 places everything in the first tick") {
  const auto opts = OptionModel::three_option();
  SimulationState st(40000, opts);
  const std::vector<InnovatorSchedule> schedules{{1, 1000, 0.025, 0}};
  seed_innovators(st, schedules, opts, 3);
  CHECK(st.innovators(1) == 1000);
  CHECK(st.counts()[1] == 1000);
}

TEST_CASE("innovator seeding respects start_tick and reports shortfall") {
  const auto opts = OptionModel::three_option();
  SimulationState st(100, opts);
  const std::vector<InnovatorSchedule> late{{1, 10, 0.5, 3}};
  seed_innovators(st, late, opts, 1);
  CHECK(st.counts()[1] == 0);

  std::vector<StateIndex> mostly_adopted(100, 0);
  mostly_adopted[7] = 2;
  mostly_adopted[42] = 2;
  SimulationState crowded(mostly_adopted, 3);
  const std::vector<InnovatorSchedule> s{{1, 10, 0.5, 0}};
  CHECK(seed_innovators(crowded, s, opts, 1) == 8);
  CHECK(crowded.state(7) == 1);
  CHECK(crowded.state(42) == 1);
  CHECK(crowded.counts()[2] == 0);
}

TEST_CASE("no adopters and utility below 1 at T = 0: nobody adopts") {
  const auto net = build_moore_lattice({10, 10});
  const auto opts = OptionModel::three_option();
  SimulationState st(100, opts);
  const auto next = step(st, net, homogeneous(100, {0.9, 0.9, 0.0}), Temperature(0.0), opts, 1);
  CHECK(next.counts()[2] == 100);
  CHECK(next.tick() == 1);
}

TEST_CASE("two A contacts out of eight trigger adoption at du = 0.6") {
  const auto net = build_moore_lattice({3, 3});
  const auto opts = OptionModel::three_option();
  std::vector<StateIndex> states(9, 2);
  states[0] = 0;
  states[1] = 0;
  const SimulationState st(states, 3);
  const auto next = step(st, net, homogeneous(9, {0.6, 0.6, 0.0}), Temperature(0.0), opts, 1);
  CHECK(next.state(4) == 0);
}

TEST_CASE("step is deterministic, synchronous and thread-count independent") {
  const auto net = rewire(build_moore_lattice({30, 30}), RewiringProbability(0.05), 4);
  const auto opts = OptionModel::four_option();
  const auto u = homogeneous(900, {0.7, 0.65, 0.6, 0.0});
  std::vector<StateIndex> states(900, 3);
  RandomStream rng(9, StreamDomain::kInnovators);
  for (int i = 0; i < 150; ++i) states[rng.bounded(900)] = static_cast<StateIndex>(rng.bounded(3));
  const SimulationState st(states, 4, 5);

  for (double temp : {0.0, 0.05}) {
    const auto one = step(st, net, u, Temperature(temp), opts, 77, 1);
    const auto four = step(st, net, u, Temperature(temp), opts, 77, 4);
    const auto again = step(st, net, u, Temperature(temp), opts, 77, 1);
    const auto ref = reference_step(states, 5, net, u, Temperature(temp), opts, 77);
    CHECK(std::equal(one.states().begin(), one.states().end(), four.states().begin()));
    CHECK(std::equal(one.states().begin(), one.states().end(), again.states().begin()));
    CHECK(std::equal(one.states().begin(), one.states().end(), ref.begin()));
  }
}

TEST_CASE("detect_saturation") {
  TimeSeries constant(10, 2);
  for (int t = 0; t < 12; ++t) constant.append(std::vector<std::int64_t>{3, 7});
  CHECK(detect_saturation(constant, 5) == 5u);
  CHECK(detect_saturation(constant, 1) == 1u);
  CHECK(detect_saturation(constant, 5, 4) == 9u);
  CHECK_FALSE(detect_saturation(constant, 12).has_value());

  TimeSeries changing(100, 2);
  for (std::int64_t t = 0; t < 50; ++t) changing.append(std::vector<std::int64_t>{t, 100 - t});
  CHECK_FALSE(detect_saturation(changing, 1).has_value());

  TimeSeries late(10, 2);
  for (std::int64_t t = 0; t < 20; ++t) late.append(std::vector<std::int64_t>{std::min<std::int64_t>(t, 8), 10 - std::min<std::int64_t>(t, 8)});
  CHECK(detect_saturation(late, 3) == 11u);
  CHECK(detect_state_saturation(late, 0, 3) == 11u);
}

TEST_CASE("run with max_ticks = 0 returns the initial state") {
  RunSetup setup;
  setup.network = build_moore_lattice({5, 5});
  setup.utilities = homogeneous(25, {0.6, 0.6, 0.0});
  setup.schedules = {{0, 1, 0.1, 0}};
  setup.max_ticks = 0;
  const auto r = run(setup);
  CHECK(r.series.ticks() == 1);
  CHECK(r.final_state.tick() == 0);
  CHECK(r.final_state.counts()[2] == 25);
  CHECK_FALSE(r.saturated());
}

TEST_CASE("zero utility without innovators freezes at T = 0") {
  RunSetup setup;
  setup.network = rewire(build_moore_lattice({20, 20}), RewiringProbability(0.1), 2);
  setup.utilities = UtilityProfile::Zero(400, 3);
  setup.max_ticks = 30;
  setup.window = 3;
  const auto r = run(setup);
  for (std::size_t t = 0; t < r.series.ticks(); ++t) CHECK(r.series.count(t, 2) == 400);
  CHECK(r.saturation_tick == 3u);
}

TEST_CASE("run invariants on a small three-option scenario") {
  Scenario scn = preset("fig1", {.grid = GridSpec{40, 40}});
  scn.seed = 11;
  const auto r = run(scn);
  CHECK(r.saturated());
  const auto& s = r.series;
  const std::size_t quota = scn.innovators[0].quota(1600);
  CHECK(r.final_state.innovators(0) == quota);
  CHECK(r.final_state.innovators(1) == quota);
  for (std::size_t t = 0; t < s.ticks(); ++t) {
    CHECK(s.count(t, 0) + s.count(t, 1) + s.count(t, 2) == 1600);
    if (t > 0) {
      CHECK(s.count(t, 0) >= s.count(t - 1, 0));
      CHECK(s.count(t, 1) >= s.count(t - 1, 1));
      CHECK(s.count(t, 2) <= s.count(t - 1, 2));
    }
  }
  CHECK(detect_saturation(s, scn.saturation_window, r.seeding_complete_tick) == r.saturation_tick);
}

TEST_CASE("delayed launch keeps the delayed product at zero before launch") {
  Scenario scn = preset("fig3", {.grid = GridSpec{30, 30}, .t_b = 3});
  const auto r = run(scn);
  for (std::size_t t = 0; t <= 3; ++t) CHECK(r.series.count(t, 1) == 0);
  CHECK(r.series.count(r.series.ticks() - 1, 1) > 0);
}
