#include <doctest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "qnash/baselines.hpp"
#include "qnash/solvers.hpp"

using namespace qnash;

namespace {

std::set<GlobalProfile> as_set(const std::vector<GlobalProfile>& v) { return {v.begin(), v.end()}; }

const BruteForceOptions unpruned{false, std::nullopt};

}  // namespace

TEST_CASE("coordination game has both diagonal equilibria") {
  const auto g = oracle::coordination();
  const std::set<GlobalProfile> expected{{0, 0}, {1, 1}};
  CHECK(as_set(oracle_pne(g).pne_found) == expected);
  CHECK(as_set(brute_force_sets(g).pne_found) == expected);
  CHECK(as_set(find_all_pne(g, Backend::exhaustive, {}).pne_found) == expected);
  CHECK(is_pne(g, GlobalProfile{1, 1}));
  CHECK_FALSE(is_pne(g, GlobalProfile{0, 1}));
}

TEST_CASE("matching pennies has no pure equilibrium") {
  const auto g = oracle::matching_pennies();
  CHECK(oracle_pne(g).pne_found.empty());
  CHECK(brute_force_sets(g).pne_found.empty());
  CHECK(find_all_pne(g, Backend::exhaustive, {}).pne_found.empty());
  RandomSearchOptions rs;
  rs.timeout = std::chrono::milliseconds(20);
  CHECK(random_search(g, rs).pne_found.empty());
}

TEST_CASE("constant payoffs make every profile an equilibrium") {
  const auto g = oracle::constant_game();
  CHECK(oracle_pne(g).pne_found.size() == 4);
  CHECK(brute_force_sets(g).pne_found.size() == 4);
  CHECK(find_all_pne(g, Backend::exhaustive, {}).pne_found.size() == 4);
}

TEST_CASE("a strictly dominant action yields a single equilibrium") {
  // player 0 always prefers action 1; player 1 matches player 0
  const auto g = oracle::two_player({0, 0, 0, 3, 3, 3, 1, 1, 1}, {1, 0, 0, 0, 1, 0, 0, 0, 1}, 3);
  const std::set<GlobalProfile> expected{{1, 1}};
  CHECK(as_set(oracle_pne(g).pne_found) == expected);
  CHECK(as_set(brute_force_sets(g).pne_found) == expected);
  CHECK(as_set(find_all_pne(g, Backend::exhaustive, {}).pne_found) == expected);
}

TEST_CASE("oracle enforces its profile cap") {
  const auto g = generate_game(Topology::circle, 11, 3, 0);
  CHECK_THROWS_AS(oracle_pne(g), CapExceeded);
  CHECK(oracle_pne(g, 200000).combinations_examined == 177147);
}

TEST_CASE("property: oracle, brute force and the exhaustive pipeline agree") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = oracle::random_forest_game(rng, 2 + trial % 6, trial % 2 ? 2 : 12);
    const auto expected = oracle::pne(g);
    CAPTURE(trial);
    CHECK(as_set(oracle_pne(g).pne_found) == expected);
    CHECK(as_set(brute_force_sets(g).pne_found) == expected);
    CHECK(as_set(brute_force_sets(g, unpruned).pne_found) == expected);
    CHECK(as_set(find_all_pne(g, Backend::exhaustive, {}).pne_found) == expected);
    for (const auto& p : expected) CHECK(is_pne(g, p));
  }
}

TEST_CASE("pruning only skips work") {
  for (Topology t : {Topology::tree, Topology::circle, Topology::road}) {
    const auto g = generate_game(t, 6, 3, 8);
    const auto pruned = brute_force_sets(g);
    const auto full = brute_force_sets(g, unpruned);
    CHECK(pruned.pne_found == full.pne_found);
    CHECK(full.combinations_examined == static_cast<std::uint64_t>(full.combinations_total));
    CHECK(full.prefixes_pruned == 0);
    CHECK(pruned.combinations_examined < full.combinations_examined);
    CHECK(pruned.prefixes_pruned > 0);
    CHECK(pruned.combinations_total == full.combinations_total);
  }
}

TEST_CASE("brute force enforces its combination cap") {
  const auto g = generate_game(Topology::road, 20, 3, 0);
  CHECK_THROWS_AS(brute_force_sets(g), CapExceeded);
  CHECK_NOTHROW(brute_force_sets(g, {true, std::nullopt}));
}

TEST_CASE("random search finds only equilibria and respects its budgets") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto g = generate_game(Topology::tree, 6, 3, seed);
    const auto expected = oracle::pne(g);
    RandomSearchOptions rs;
    rs.seed = seed;
    rs.timeout = std::chrono::seconds(10);
    rs.max_samples = 20000;
    const auto report = random_search(g, rs);
    CHECK(report.combinations_examined == 20000);
    for (const auto& p : report.pne_found) CHECK(expected.contains(p));
    CHECK(random_search(g, rs).pne_found == report.pne_found);
  }
  const auto g = generate_game(Topology::circle, 6, 3, 1);
  RandomSearchOptions none;
  const auto empty = random_search(g, none);
  CHECK(empty.combinations_examined == 0);
  CHECK(empty.pne_found.empty());
  RandomSearchOptions forever;
  forever.timeout = std::chrono::nanoseconds::max();
  forever.max_samples = 100;
  CHECK(random_search(g, forever).combinations_examined == 100);
}

TEST_CASE("random search eventually samples every equilibrium of a tiny game") {
  const auto g = oracle::coordination();
  RandomSearchOptions rs;
  rs.timeout = std::chrono::seconds(10);
  rs.max_samples = 2000;
  CHECK(random_search(g, rs).pne_found.size() == 2);
}
