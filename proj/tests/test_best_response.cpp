#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "qnash/best_response.hpp"

using namespace qnash;

namespace {

std::set<std::vector<Assignment>> library_sets(const GraphicalGame& g, Player p) {
  std::set<std::vector<Assignment>> out;
  for (const auto& s : best_responses(g, p)) out.insert(s.members());
  return out;
}

}  // namespace

TEST_CASE("three-player example: A has seven pointed sets") {
  const auto g = oracle::three_player_example();
  const auto sets = best_responses(g, 0);
  REQUIRE(sets.size() == 7);
  // B0C0 -> A0, B0C1 -> A1, B1C0 -> A0 and A1, B1C1 -> A0, B2C0 -> A1, B2C1 -> A0
  const std::vector<std::tuple<Action, Action, Action>> expected{
      {0, 0, 0}, {1, 0, 1}, {0, 1, 0}, {1, 1, 0}, {0, 1, 1}, {1, 2, 0}, {0, 2, 1}};
  for (std::size_t k = 0; k < sets.size(); ++k) {
    const auto [a, b, c] = expected[k];
    CHECK(sets[k].base_player == 0);
    CHECK(sets[k].base_action == a);
    CHECK(sets[k].context == std::vector<Assignment>{{1, b}, {2, c}});
  }
  CHECK(library_sets(g, 0) == oracle::pointed_sets(g, 0));
}

TEST_CASE("indifferent players keep every action") {
  const auto g = oracle::three_player_example();
  // B and C have constant payoffs, so every local profile is a pointed set
  CHECK(best_responses(g, 1).size() == 6);
  CHECK(best_responses(g, 2).size() == 4);
  const auto b = collect_b(g);
  CHECK(b.c_b() == 17);
  CHECK(b.first_of(1) == 7);
  CHECK(b.of_player(2).size() == 4);
  CHECK(b.num_players() == 3);
}

TEST_CASE("collection size is bounded by n * d^(k+1)") {
  for (Topology t : {Topology::tree, Topology::circle, Topology::road}) {
    const auto g = generate_game(t, 10, 3, 9);
    const auto b = collect_b(g);
    std::size_t bound = 0;
    for (Player p = 0; p < g.num_players(); ++p) {
      bound += g.payoff_table(p).size();
      CHECK(b.of_player(p).size() >= g.payoff_table(p).size() / 3);
    }
    CHECK(b.c_b() <= bound);
  }
}

TEST_CASE("property: best responses are sound and complete on random forests") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 6);
    const auto g = oracle::random_forest_game(rng, n, trial % 3 == 0 ? 2 : 9);
    const auto b = collect_b(g);
    std::size_t total = 0;
    for (Player p = 0; p < n; ++p) {
      CAPTURE(trial);
      CAPTURE(p);
      CHECK(library_sets(g, p) == oracle::pointed_sets(g, p));
      for (const auto& s : b.of_player(p)) CHECK(s.base_player == p);
      total += b.of_player(p).size();
    }
    CHECK(total == b.c_b());
  }
}

TEST_CASE("property: generated topologies agree with the oracle") {
  for (Topology t : {Topology::tree, Topology::circle, Topology::road}) {
    const auto g = generate_game(t, 6, 3, 2);
    for (Player p = 0; p < 6; ++p) CHECK(library_sets(g, p) == oracle::pointed_sets(g, p));
  }
}

TEST_CASE("JSON lines output lists one set per line") {
  const auto g = oracle::three_player_example();
  const auto b = collect_b(g);
  std::ostringstream out;
  write_jsonl(out, b);
  const std::string text = out.str();
  CHECK(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) == b.c_b());
  CHECK(text.rfind(R"({"base":0,"action":0,"context":{"1":0,"2":0}})", 0) == 0);
}
