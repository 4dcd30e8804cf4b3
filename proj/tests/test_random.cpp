#include "doctest.h"

#include <vector>

#include "potts/random.hpp"

using potts::RandomStream;
using potts::StreamDomain;

TEST_CASE("streams with the same key repeat exactly") {
  RandomStream a(42, StreamDomain::kDecision, 3, 17);
  RandomStream b(42, StreamDomain::kDecision, 3, 17);
  for (int i = 0; i < 100; ++i) CHECK(a() == b());
}

TEST_CASE("distinct keys give distinct streams") {
  RandomStream a(42, StreamDomain::kDecision, 3, 17);
  RandomStream b(42, StreamDomain::kDecision, 3, 18);
  RandomStream c(43, StreamDomain::kDecision, 3, 17);
  RandomStream d(42, StreamDomain::kInnovators, 3, 17);
  const auto x = a();
  CHECK(x != b());
  CHECK(x != c());
  CHECK(x != d());
}

TEST_CASE("uniform01 stays in [0, 1) and bounded stays below its bound") {
  RandomStream rng(7, StreamDomain::kRewire);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(rng.bounded(13) < 13u);
  }
}

TEST_CASE("bounded is roughly uniform") {
  RandomStream rng(11, StreamDomain::kUtilities);
  std::vector<int> hist(10, 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++hist[rng.bounded(10)];
  // binomial sd = sqrt(1e5 * 0.1 * 0.9) ~ 95; 5 sd band
  for (int h : hist) CHECK(std::abs(h - draws / 10) < 475);
}
