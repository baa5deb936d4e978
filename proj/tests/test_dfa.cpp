#include <array>
#include <cmath>

#include "common.hpp"
#include "doctest.h"
#include "syncauto/dfa.hpp"
#include "syncauto/oracle.hpp"

using namespace syncauto;
using namespace syncauto::testing;

TEST_CASE("dfa construction validates the table") {
  CHECK_THROWS_AS(Dfa(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(Dfa(2, 0), std::invalid_argument);
  CHECK_THROWS_AS(Dfa(2, 1, {0, 2}), std::invalid_argument);   // entry out of range
  CHECK_THROWS_AS(Dfa(2, 2, {0, 1, 0}), std::invalid_argument);  // wrong cell count
  const Dfa d = c4();
  CHECK(d.step(3, 1) == 0);
  CHECK(d.row(0)[0] == 1);
}

TEST_CASE("random_dfa: single-state automaton has the only possible table") {
  for (std::uint64_t seed : {0ull, 7ull, 123456789ull}) {
    Rng rng(seed);
    const Dfa d = random_dfa(1, 2, rng);
    CHECK(d.delta == std::vector<State>{0, 0});
  }
}

TEST_CASE("random_dfa: same seed, same table") {
  Rng a(42), b(42);
  const Dfa d1 = random_dfa(4, 2, a);
  const Dfa d2 = random_dfa(4, 2, b);
  CHECK(d1 == d2);
  CHECK_THROWS_AS(random_dfa(0, 2, a), std::invalid_argument);
  CHECK_THROWS_AS(random_dfa(2, 0, a), std::invalid_argument);
}

TEST_CASE("random_dfa: entry frequency is uniform") {
  Rng rng(2024);
  const int trials = 1'000'000;
  int hits = 0;
  for (int t = 0; t < trials; ++t) {
    const Dfa d = random_dfa(5, 2, rng);
    if (d.step(0, 0) == 0) ++hits;
  }
  const double freq = double(hits) / trials;
  CHECK(std::abs(freq - 0.2) < 0.002);
}

TEST_CASE("random_dfa: all 27 maps at n=3 appear with frequency 1/27") {
  Rng rng(7);
  const int trials = 1'000'000;
  std::array<int, 27> counts{};
  for (int t = 0; t < trials; ++t) {
    const Dfa d = random_dfa(3, 1, rng);
    counts[d.delta[0] * 9 + d.delta[1] * 3 + d.delta[2]]++;
  }
  for (int c : counts) CHECK(std::abs(double(c) / trials - 1.0 / 27.0) < 0.002);
}

TEST_CASE("parse_dfa reads the circular 4-state automaton") {
  const Dfa d = parse_dfa(R"({"n":4,"k":2,"delta":[[1,2,3,0],[0,1,2,0]]})");
  CHECK(d == c4());
}

TEST_CASE("serialize/parse round trip") {
  const std::string t = R"({"n":4,"k":2,"delta":[[1,2,3,0],[0,1,2,0]]})";
  CHECK(serialize_dfa(parse_dfa(t)) == t);  // canonical text is reproduced exactly
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const Dfa d = random_dfa(1 + int(rng.next_below(30)), 1 + int(rng.next_below(3)), rng);
    CHECK(parse_dfa(serialize_dfa(d)) == d);
  }
}

TEST_CASE("parse_dfa errors name the offending field") {
  CHECK_THROWS_WITH_AS(parse_dfa(R"({"n":2,"k":1,"delta":[[0,2]]})"),
                       doctest::Contains("entry 2 out of range"), ParseError);
  CHECK_THROWS_AS(parse_dfa(R"({"n":2,"k":2,"delta":[[0,1]]})"), ParseError);
  CHECK_THROWS_AS(parse_dfa(R"({"n":2,"k":1,"delta":[[0]]})"), ParseError);
  CHECK_THROWS_AS(parse_dfa(R"({"k":1,"delta":[[0]]})"), ParseError);
  CHECK_THROWS_AS(parse_dfa("not json at all"), ParseError);
  CHECK_THROWS_AS(parse_dfa(R"({"n":0,"k":1,"delta":[[]]})"), ParseError);
}

TEST_CASE("apply_word follows the table left to right") {
  const Dfa d = c4();
  CHECK(apply_word(d, 0, Word{0, 0, 0, 0}) == 0);  // letter 0 is a 4-cycle
  CHECK(apply_word(d, 3, Word{1}) == 0);
  CHECK(apply_word(d, 2, Word{}) == 2);
  CHECK_THROWS_AS(apply_word(d, 4, Word{}), std::invalid_argument);
  CHECK_THROWS_AS(apply_word(d, 0, Word{2}), std::invalid_argument);
}

TEST_CASE("apply_word composes") {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const State n = 1 + State(rng.next_below(20));
    const Dfa d = random_dfa(n, 2, rng);
    Word u, v;
    for (std::uint32_t j = rng.next_below(6); j--;) u.push_back(Letter(rng.next_below(2)));
    for (std::uint32_t j = rng.next_below(6); j--;) v.push_back(Letter(rng.next_below(2)));
    Word uv = u;
    uv.insert(uv.end(), v.begin(), v.end());
    const State q = State(rng.next_below(std::uint32_t(n)));
    CHECK(apply_word(d, q, uv) == apply_word(d, apply_word(d, q, u), v));
  }
}

TEST_CASE("image deduplicates and never grows") {
  const Dfa d = c4();
  const std::vector<State> all{0, 1, 2, 3};
  CHECK(image(d, all, 1) == std::vector<State>{0, 1, 2});
  CHECK(image(d, std::vector<State>{}, 0).empty());
  CHECK(image(d, std::vector<State>{2}, 0) == std::vector<State>{3});

  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const State n = 1 + State(rng.next_below(30));
    const Dfa r = random_dfa(n, 2, rng);
    std::vector<State> s;
    for (State q = 0; q < n; ++q)
      if (rng.next_below(2)) s.push_back(q);
    for (Letter x = 0; x < 2; ++x) CHECK(image(r, s, x).size() <= s.size());
  }
}

TEST_CASE("weak connectivity via union-find") {
  CHECK(is_weakly_connected(c4()));

  const Dfa two_identity = make2(2, {0, 1}, {0, 1});
  const WeakComponents wc = weak_components(two_identity);
  CHECK_FALSE(wc.connected);
  CHECK(wc.count == 2);
  CHECK(wc.label == std::vector<std::int32_t>{0, 1});

  const Dfa three_identity = make2(3, {0, 1, 2}, {0, 1, 2});
  CHECK(weak_components(three_identity).count == 3);
}

TEST_CASE("minimal closed components are the terminal SCCs") {
  const ClosedComponents cc = minimal_closed_components(c4());
  REQUIRE(cc.components.size() == 1);
  CHECK(cc.components[0] == std::vector<State>{0, 1, 2, 3});

  const Dfa sink = make2(2, {0, 0}, {0, 0});
  const ClosedComponents cs = minimal_closed_components(sink);
  REQUIRE(cs.components.size() == 1);
  CHECK(cs.components[0] == std::vector<State>{0});

  const Dfa two_identity = make2(2, {0, 1}, {0, 1});
  const ClosedComponents ci = minimal_closed_components(two_identity);
  REQUIRE(ci.components.size() == 2);
  CHECK(ci.components[0] == std::vector<State>{0});
  CHECK(ci.components[1] == std::vector<State>{1});
}

TEST_CASE("every state reaches some minimal closed component") {
  Rng rng(17);
  for (int i = 0; i < 100; ++i) {
    const State n = 1 + State(rng.next_below(40));
    const Dfa d = random_dfa(n, 2, rng);
    const ClosedComponents cc = minimal_closed_components(d);
    std::vector<std::uint8_t> in_comp(n, 0);
    for (const auto& comp : cc.components)
      for (State q : comp) in_comp[q] = 1;
    for (State q = 0; q < n; ++q) {
      bool reaches = false;
      for (State r : forward_closure(d, {q}))
        if (in_comp[r]) {
          reaches = true;
          break;
        }
      CHECK(reaches);
    }
  }
}

TEST_CASE("disconnected singleton probability formula") {
  CHECK(disconnected_singleton_probability(3) == doctest::Approx(1.0 / 27.0).epsilon(1e-12));
  CHECK(disconnected_singleton_probability(4) == doctest::Approx(1.0 / 32.0).epsilon(1e-12));
  const double n = 1'000'000;
  CHECK(std::abs(n * disconnected_singleton_probability(1'000'000) - std::exp(-2.0)) < 1e-5);
  CHECK_THROWS_AS(disconnected_singleton_probability(2), std::invalid_argument);
}

TEST_CASE("exhaustive n=3: the counted one-disconnected family has 27 members") {
  std::uint64_t count = 0;
  const std::uint64_t total = enumerate_all(3, 2, [&](const Dfa& d) {
    if (exactly_one_disconnected_state(d)) ++count;
  });
  CHECK(total == 729);
  CHECK(count == 27);  // n * (n(n-2))^(n-1)
}

TEST_CASE("not weakly connected implies not synchronizing") {
  for (State n : {2, 3}) {
    enumerate_all(n, 2, [&](const Dfa& d) {
      if (!is_weakly_connected(d)) CHECK_FALSE(decide_exact(d).synchronizing);
    });
  }
}
