#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "potts/decision.hpp"

using namespace potts;

namespace {

using Vec = OptionVector<double>;

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

OptionModel all_allowed(int m) {
  std::vector<std::string> labels;
  std::vector<std::pair<StateIndex, StateIndex>> t;
  for (int i = 0; i < m; ++i) {
    labels.push_back("s" + std::to_string(i));
    for (int j = 0; j < m; ++j) t.emplace_back(i, j);
  }
  return OptionModel(labels, t);
}

// P(k) = 1 / (1 + sum_{j != k} exp(-beta * Delta_kj)), evaluated literally.
Vec gap_form(const Vec& m, double beta) {
  Vec p(m.size());
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    double s = 1.0;
    for (Eigen::Index j = 0; j < m.size(); ++j) {
      if (j != k) s += std::exp(-beta * (m[k] - m[j]));
    }
    p[k] = 1.0 / s;
  }
  return p;
}

}  // namespace

TEST_CASE("option model presets") {
  const auto three = OptionModel::three_option();
  CHECK(three.size() == 3);
  CHECK(three.non_adoption() == 2);
  CHECK(three.allowed(2, 0));
  CHECK(three.allowed(2, 1));
  CHECK_FALSE(three.allowed(0, 1));
  CHECK_FALSE(three.allowed(0, 2));
  CHECK(three.absorbing(0));
  CHECK(three.absorbing(1));
  CHECK_FALSE(three.absorbing(2));

  const auto four = OptionModel::four_option();
  CHECK(four.size() == 4);
  CHECK(four.label(2) == "AB");
  CHECK(four.allowed(0, 2));
  CHECK(four.allowed(1, 2));
  CHECK(four.allowed(3, 2));
  CHECK_FALSE(four.allowed(0, 1));
  CHECK_FALSE(four.allowed(2, 0));
  CHECK(four.absorbing(2));
  CHECK_FALSE(four.absorbing(0));
  for (int k = 0; k < 4; ++k) CHECK(four.allowed(static_cast<StateIndex>(k), static_cast<StateIndex>(k)));

  const auto no_b = three.without_target(1);
  CHECK_FALSE(no_b.allowed(2, 1));
  CHECK(no_b.allowed(1, 1));
  CHECK(no_b.allowed(2, 0));
}

TEST_CASE("neighbor fractions count contacts by state") {
  // Centre of a 3x3 grid has 8 contacts.
  const auto net = build_moore_lattice({3, 3});
  std::vector<StateIndex> states(9, 2);
  states[0] = 0;
  states[1] = 0;
  const auto nu = neighbor_fractions(net, states, 4, 3);
  CHECK(nu[0] == 0.25);
  CHECK(nu[1] == 0.0);
  CHECK(nu[2] == 0.75);
  CHECK(nu.sum() == doctest::Approx(1.0));

  std::vector<StateIndex> all_b(9, 1);
  const auto pure = neighbor_fractions(net, all_b, 4, 3);
  CHECK(pure[1] == 1.0);
  CHECK(pure[0] == 0.0);
}

TEST_CASE("local field") {
  const Vec m = local_field(vec({0.25, 0.0, 0.75}), vec({0.6, 0.6, 0.0}));
  CHECK(m[0] == doctest::Approx(0.85).epsilon(1e-15));
  CHECK(m[1] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(m[2] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(local_field(vec({0.1, 0.9}), Vec::Zero(2)) == vec({0.1, 0.9}));
  // Delta_12 = nu_1 - nu_2 + u_1 - u_2
  const Vec nu = vec({0.3, 0.7});
  const Vec u = vec({0.5, 0.1});
  CHECK(field_gap(local_field(nu, u), 0, 1) == doctest::Approx((0.3 - 0.7) + (0.5 - 0.1)));
  CHECK_THROWS_AS(local_field(vec({0.1, 0.9}), vec({0.1, 0.2, 0.3})), UsageError);
}

TEST_CASE("uniform field and infinite temperature give uniform probabilities") {
  const auto opts = all_allowed(4);
  const auto p = choice_probabilities(vec({0.3, 0.3, 0.3, 0.3}), 20.0, 0, opts);
  for (int k = 0; k < 4; ++k) CHECK(p[k] == doctest::Approx(0.25).epsilon(1e-15));
  const auto hot = choice_probabilities(vec({0.9, 0.1, 0.5, 0.0}), 0.0, 0, opts);
  for (int k = 0; k < 4; ++k) CHECK(hot[k] == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("three-option probabilities at T = 0.05 match high-precision values") {
  // Frozen from a 30-digit evaluation of exp(beta m_k) / sum_j exp(beta m_j).
  const Vec m = vec({0.85, 0.6, 0.75});
  const auto opts = all_allowed(3);
  const auto p = choice_probabilities(m, Temperature(0.05), 0, opts);
  CHECK(std::abs(p[0] - 0.875600595063087637) < 1e-12);
  CHECK(std::abs(p[1] - 0.005899750401902781) < 1e-12);
  CHECK(std::abs(p[2] - 0.118499654535009582) < 1e-12);
  CHECK((p - gap_form(m, 20.0)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("disallowed targets get exactly zero and the rest renormalise") {
  const auto opts = OptionModel::three_option().without_target(1);
  const auto p = choice_probabilities(vec({0.85, 0.99, 0.75}), 20.0, 2, opts);
  CHECK(p[1] == 0.0);
  CHECK(p[0] + p[2] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p[0] == doctest::Approx(1.0 / (1.0 + std::exp(-20.0 * 0.1))).epsilon(1e-13));

  const auto absorbed = choice_probabilities(vec({0.1, 0.9, 0.8}), 20.0, 0, OptionModel::three_option());
  CHECK(absorbed[0] == 1.0);
  CHECK(absorbed[1] == 0.0);
  CHECK(absorbed[2] == 0.0);
}

TEST_CASE("large beta does not overflow") {
  const auto opts = all_allowed(3);
  const auto p = choice_probabilities(vec({0.9, 0.1, 0.5}), 1e8, 0, opts);
  CHECK(p.allFinite());
  CHECK(p[0] == 1.0);
}

TEST_CASE("non-finite fields and zero temperature are rejected by the finite-T form") {
  const auto opts = all_allowed(2);
  CHECK_THROWS_AS(choice_probabilities(vec({std::nan(""), 0.1}), 1.0, 0, opts), NumericalError);
  CHECK_THROWS_AS(choice_probabilities(vec({std::numeric_limits<double>::infinity(), 0.1}), 1.0, 0, opts),
                  NumericalError);
  CHECK_THROWS_AS(choice_probabilities(vec({0.5, 0.1}), Temperature(0.0), 0, opts), UsageError);
  CHECK_THROWS_AS(Temperature(-1.0), ConfigError);
}

TEST_CASE("zero temperature: adoption threshold for an 8-contact agent") {
  const auto opts = OptionModel({"A", "0"}, {{1, 0}});
  auto adopt_probability = [&](int adopters, double du) {
    const double nu_a = adopters / 8.0;
    const Vec m = local_field(vec({nu_a, 1.0 - nu_a}), vec({du, 0.0}));
    return zero_temperature_probabilities(m, 1, opts)[0];
  };
  CHECK(adopt_probability(2, 0.6) == 1.0);
  CHECK(adopt_probability(1, 0.6) == 0.0);
  CHECK(adopt_probability(1, 0.8) == 1.0);
  CHECK(adopt_probability(0, 0.8) == 0.0);
}

TEST_CASE("zero temperature ties split the mass evenly") {
  const auto opts = all_allowed(4);
  const auto p = zero_temperature_probabilities(vec({0.5, 0.7, 0.7, 0.7}), 0, opts);
  CHECK(p[0] == 0.0);
  for (int k = 1; k < 4; ++k) CHECK(p[k] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  const auto two = zero_temperature_probabilities(vec({0.4, 0.4}), 0, all_allowed(2));
  CHECK(two[0] == 0.5);
  CHECK(two[1] == 0.5);
  // The maximiser is taken over allowed targets only.
  const auto restricted = zero_temperature_probabilities(vec({0.9, 0.5, 0.2}), 2, OptionModel::three_option().without_target(0));
  CHECK(restricted[0] == 0.0);
  CHECK(restricted[1] == 1.0);
}

TEST_CASE("sample_state") {
  CHECK(sample_state(vec({1.0, 0.0, 0.0}), 0.999) == 0);
  CHECK(sample_state(vec({0.0, 0.0, 1.0}), 0.0) == 2);
  CHECK(sample_state(vec({0.5, 0.5, 0.0}), 0.4999) == 0);
  CHECK(sample_state(vec({0.5, 0.5, 0.0}), 0.5) == 1);
  // Rounding slack never lands on a zero-probability tail state.
  CHECK(sample_state(vec({0.3, 0.7 - 1e-12, 0.0}), 0.99999999999999) == 1);
  CHECK_THROWS_AS(sample_state(vec({0.5, 0.6}), 0.1), NumericalError);
  CHECK_THROWS_AS(sample_state(vec({-0.5, 1.5}), 0.1), NumericalError);

  RandomStream a(3, StreamDomain::kDecision);
  RandomStream b(3, StreamDomain::kDecision);
  for (int i = 0; i < 50; ++i) CHECK(sample_state(vec({0.2, 0.3, 0.5}), a) == sample_state(vec({0.2, 0.3, 0.5}), b));
}

TEST_CASE("sample_state frequencies stay within 3 sigma") {
  RandomStream rng(2024, StreamDomain::kDecision);
  const int draws = 1000000;
  int zeros = 0;
  for (int i = 0; i < draws; ++i) zeros += sample_state(vec({0.5, 0.5, 0.0}), rng) == 0;
  const double sigma = std::sqrt(draws * 0.25);
  CHECK(std::abs(zeros - draws / 2) < 3.0 * sigma);
}

TEST_CASE("kernel templated on float") {
  OptionVector<float> m(3);
  m << 0.85f, 0.6f, 0.75f;
  const auto p = choice_probabilities(m, 20.0f, 2, OptionModel::three_option());
  CHECK(p.sum() == doctest::Approx(1.0f).epsilon(1e-6));
  CHECK(p[0] == doctest::Approx(0.8756006f).epsilon(1e-5));
}
