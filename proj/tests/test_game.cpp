#include <doctest.h>

#include <array>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "oracles.hpp"
#include "qnash/game.hpp"

using namespace qnash;

namespace {

std::set<std::pair<Player, Player>> edges_of(const GraphicalGame& g) {
  std::set<std::pair<Player, Player>> e;
  for (Player p = 0; p < g.num_players(); ++p) {
    for (Player q : g.neighborhood(p).subspan(1)) e.insert({std::min(p, q), std::max(p, q)});
  }
  return e;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("qnash_test_" + name);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path) << text;
}

GameErrc load_error(const std::string& text) {
  try {
    game_from_json(text);
  } catch (const GameError& e) {
    return e.code();
  }
  FAIL("expected a GameError");
  return GameErrc::invalid_argument;
}

}  // namespace

TEST_CASE("three-player example: payoff lookup follows the table layout") {
  const auto g = oracle::three_player_example();
  CHECK(g.num_players() == 3);
  CHECK(g.max_degree() == 2);
  CHECK(g.representation_size() == 12 + 6 + 4);
  const std::array<Action, 3> a0b2c1{0, 2, 1};
  const std::array<Action, 3> a1b0c0{1, 0, 0};
  CHECK(payoff(g, 0, a0b2c1) == 4);
  CHECK(payoff(g, 0, a1b0c0) == 1);
  CHECK(g.local_index(LocalProfile{0, {1, 2, 1}}) == 6 + 5);
  CHECK(g.stride(0, 0) == 6);
  CHECK(g.stride(0, 1) == 2);
  CHECK(g.stride(0, 2) == 1);
  CHECK(g.restrict_to(1, a0b2c1) == LocalProfile{1, {2, 0}});
}

TEST_CASE("construction rejects malformed games") {
  const auto code_of = [](auto&& make) {
    try {
      make();
    } catch (const GameError& e) {
      return e.code();
    }
    FAIL("expected a GameError");
    return GameErrc::invalid_argument;
  };
  CHECK(code_of([] { GraphicalGame({2}, {{0}}, {{1, 2}}); }) == GameErrc::invalid_argument);
  CHECK(code_of([] { GraphicalGame({2, 1}, {{0}, {1}}, {{1, 2}, {1}}); }) == GameErrc::invalid_argument);
  // owner not first
  CHECK(code_of([] { GraphicalGame({2, 2}, {{1, 0}, {1, 0}}, {{0, 0, 0, 0}, {0, 0, 0, 0}}); }) ==
        GameErrc::neighborhood_order);
  // others not ascending
  CHECK(code_of([] {
          GraphicalGame({2, 2, 2}, {{0, 2, 1}, {1, 0}, {2, 0}},
                        {std::vector<Payoff>(8), std::vector<Payoff>(4), std::vector<Payoff>(4)});
        }) == GameErrc::neighborhood_order);
  // 0 lists 1 but 1 does not list 0
  CHECK(code_of([] { GraphicalGame({2, 2}, {{0, 1}, {1}}, {{0, 0, 0, 0}, {0, 0}}); }) ==
        GameErrc::asymmetric_neighborhood);
  CHECK(code_of([] { GraphicalGame({2, 2}, {{0, 1}, {1, 0}}, {{0, 0, 0}, {0, 0, 0, 0}}); }) ==
        GameErrc::payoff_table_size);
  CHECK(code_of([] { GraphicalGame({2, 2}, {{0, 5}, {1}}, {{0, 0, 0, 0}, {0, 0}}); }) == GameErrc::out_of_range);
}

TEST_CASE("payoff rejects profiles of the wrong shape") {
  const auto g = oracle::coordination();
  const std::array<Action, 1> short_profile{0};
  const std::array<Action, 2> bad_action{0, 2};
  CHECK_THROWS_AS(payoff(g, 0, short_profile), GameError);
  CHECK_THROWS_AS(payoff(g, 0, bad_action), GameError);
  const std::array<Action, 2> ok{1, 1};
  CHECK_THROWS_AS(payoff(g, 2, ok), GameError);
}

TEST_CASE("generator builds the documented topologies") {
  SUBCASE("circle") {
    for (int n : {3, 6, 11}) {
      const auto g = generate_game(Topology::circle, n, 3, 1);
      const auto e = edges_of(g);
      CHECK(e.size() == static_cast<std::size_t>(n));
      for (Player p = 0; p < n; ++p) CHECK(g.neighborhood(p).size() == 3);
      CHECK(e.contains({0, n - 1}));
    }
  }
  SUBCASE("tree") {
    for (int n : {2, 7, 10}) {
      const auto g = generate_game(Topology::tree, n, 3, 1);
      const auto e = edges_of(g);
      CHECK(e.size() == static_cast<std::size_t>(n - 1));
      for (Player p = 1; p < n; ++p) CHECK(e.contains({(p - 1) / 2, p}));
    }
  }
  SUBCASE("road") {
    for (int n : {2, 6, 10}) {
      const auto g = generate_game(Topology::road, n, 3, 1);
      const auto e = edges_of(g);
      const int half = n / 2;
      CHECK(e.size() == static_cast<std::size_t>(2 * (half - 1) + half));
      for (int c = 0; c < half; ++c) CHECK(e.contains({c, half + c}));
      CHECK(g.max_degree() <= 3);
    }
  }
  for (Topology t : {Topology::tree, Topology::circle, Topology::road}) {
    const auto g = generate_game(t, 8, 3, 5);
    for (Player p = 0; p < g.num_players(); ++p) {
      CHECK(g.num_actions(p) == 3);
      for (Payoff v : g.payoff_table(p)) CHECK((v >= 0 && v <= 15));
    }
  }
}

TEST_CASE("generator rejects impossible shapes") {
  CHECK_THROWS_WITH_AS(generate_game(Topology::road, 7, 3, 0), "road requires even n", GameError);
  CHECK_THROWS_AS(generate_game(Topology::circle, 2, 3, 0), GameError);
  CHECK_THROWS_AS(generate_game(Topology::tree, 1, 3, 0), GameError);
  CHECK_THROWS_AS(generate_game(Topology::tree, 4, 1, 0), GameError);
  CHECK_THROWS_AS(parse_topology("grid"), GameError);
  CHECK(parse_topology("road") == Topology::road);
  CHECK(to_string(Topology::tree) == "tree");
}

TEST_CASE("generator is deterministic per seed") {
  CHECK(generate_game(Topology::road, 10, 3, 42) == generate_game(Topology::road, 10, 3, 42));
  CHECK_FALSE(generate_game(Topology::road, 10, 3, 42) == generate_game(Topology::road, 10, 3, 43));
  CHECK(to_json(generate_game(Topology::tree, 9, 2, 7)) == to_json(generate_game(Topology::tree, 9, 2, 7)));
}

TEST_CASE("generated payoffs are uniform on 0..15") {
  std::array<long, 16> histogram{};
  long total = 0;
  for (std::uint64_t seed = 0; total < 120000; ++seed) {
    const auto g = generate_game(Topology::circle, 20, 3, seed);
    for (const auto& table : g.payoff_tables()) {
      for (Payoff v : table) {
        ++histogram[v];
        ++total;
      }
    }
  }
  const double expected = static_cast<double>(total) / 16.0;
  for (long count : histogram) CHECK(std::abs(count - expected) / expected < 0.05);
}

TEST_CASE("save and load round trip, including random games") {
  std::mt19937_64 rng(3);
  const auto path = temp_file("roundtrip.json");
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = trial % 2 ? oracle::random_forest_game(rng, 2 + trial % 6, 9)
                             : generate_game(Topology::circle, 3 + trial, 3, trial);
    save_game(path, g);
    CHECK(load_game(path) == g);
    CHECK(game_from_json(to_json(g)) == g);
  }
  std::filesystem::remove(path);
}

TEST_CASE("loader reports malformed files") {
  CHECK(load_error("{") == GameErrc::malformed_file);
  CHECK(load_error("[]") == GameErrc::malformed_file);
  CHECK(load_error(R"({"n":2,"actions":[2,2],"neighborhoods":[[0,1],[1,0]]})") == GameErrc::malformed_file);
  CHECK(load_error(R"({"n":3,"actions":[2,2],"neighborhoods":[[0,1],[1,0]],"payoffs":[[0,0,0,0],[0,0,0,0]]})") ==
        GameErrc::malformed_file);
  CHECK(load_error(R"({"n":2,"actions":[2,2],"neighborhoods":[[0,1],[1,0]],"payoffs":[[0,0,0,0.5],[0,0,0,0]]})") ==
        GameErrc::malformed_file);
  CHECK(load_error(R"({"n":2,"actions":[2,2],"neighborhoods":[[0,1],[1,0]],"payoffs":[[0,0,0],[0,0,0,0]]})") ==
        GameErrc::payoff_table_size);
  CHECK(load_error(R"({"n":2,"actions":[2,2],"neighborhoods":[[0,1],[1]],"payoffs":[[0,0,0,0],[0,0]]})") ==
        GameErrc::asymmetric_neighborhood);
  CHECK(load_error(R"({"n":2,"actions":[2,2],"neighborhoods":[[1,0],[1,0]],"payoffs":[[0,0,0,0],[0,0,0,0]]})") ==
        GameErrc::neighborhood_order);

  const auto path = temp_file("bad.json");
  write_file(path, "not json");
  CHECK_THROWS_AS(load_game(path), GameError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_game(temp_file("does_not_exist.json")), std::runtime_error);
}
