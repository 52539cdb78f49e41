#pragma once

// Independent reference computations used by the tests. Nothing here calls
// the library's best-response, QUBO or baseline code; only the game model
// (payoff lookup) and the documented variable layout are shared.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "qnash/best_response.hpp"
#include "qnash/game.hpp"
#include "qnash/qubo.hpp"

namespace oracle {

using qnash::Action;
using qnash::GlobalProfile;
using qnash::GraphicalGame;
using qnash::Payoff;
using qnash::Player;

/// Calls f(profile) for every global profile in lexicographic order.
template <class F>
void for_each_profile(const GraphicalGame& game, F&& f) {
  const int n = game.num_players();
  GlobalProfile s(n, 0);
  while (true) {
    f(static_cast<const GlobalProfile&>(s));
    int i = n - 1;
    while (i >= 0 && ++s[i] == game.num_actions(i)) s[i--] = 0;
    if (i < 0) return;
  }
}

inline bool no_profitable_deviation(const GraphicalGame& game, const GlobalProfile& s) {
  GlobalProfile t = s;
  for (Player p = 0; p < game.num_players(); ++p) {
    const Payoff here = qnash::payoff(game, p, s);
    for (Action a = 0; a < game.num_actions(p); ++a) {
      t[p] = a;
      if (qnash::payoff(game, p, t) > here) return false;
    }
    t[p] = s[p];
  }
  return true;
}

inline std::set<GlobalProfile> pne(const GraphicalGame& game) {
  std::set<GlobalProfile> out;
  for_each_profile(game, [&](const GlobalProfile& s) {
    if (no_profitable_deviation(game, s)) out.insert(s);
  });
  return out;
}

/// Pointed sets of p as (base action, full neighborhood assignment) pairs,
/// by scanning every global profile and keeping the argmax actions.
inline std::set<std::vector<qnash::Assignment>> pointed_sets(const GraphicalGame& game, Player p) {
  std::set<std::vector<qnash::Assignment>> out;
  const auto hood = game.neighborhood(p);
  for_each_profile(game, [&](const GlobalProfile& s) {
    GlobalProfile t = s;
    Payoff best = INT64_MIN;
    for (Action a = 0; a < game.num_actions(p); ++a) {
      t[p] = a;
      best = std::max(best, qnash::payoff(game, p, t));
    }
    if (qnash::payoff(game, p, s) != best) return;
    std::vector<qnash::Assignment> members;
    for (Player q : hood) members.push_back({q, s[q]});
    out.insert(members);
  });
  return out;
}

/// H evaluated term by term from the written objective:
///   A sum_p (1 - sum_{j,m} x_{p,j,m})^2
///   + A sum_{p,j} (sum_m m x_{p,j,m} - sum_{k: (p,j) in set k} x_k)^2
///   + A (n - sum_k x_k)^2
/// Coverage is recomputed from the pointed sets themselves.
inline std::int64_t written_energy(const qnash::BestResponseCollection& b, const GraphicalGame& game,
                                   const qnash::VariableIndex& index, std::int64_t a,
                                   const std::vector<std::uint8_t>& x) {
  const int n = game.num_players();
  std::int64_t h = 0;
  for (Player p = 0; p < n; ++p) {
    std::int64_t chosen = 0;
    for (Action j = 0; j < game.num_actions(p); ++j) {
      for (int m = 1; m <= index.multiplicity_range(p, j); ++m) chosen += x[index.multiplicity_var(p, j, m)];
    }
    h += a * (1 - chosen) * (1 - chosen);
  }
  for (Player p = 0; p < n; ++p) {
    for (Action j = 0; j < game.num_actions(p); ++j) {
      std::int64_t claimed = 0;
      for (int m = 1; m <= index.multiplicity_range(p, j); ++m) claimed += m * x[index.multiplicity_var(p, j, m)];
      std::int64_t covered = 0;
      for (std::size_t k = 0; k < b.c_b(); ++k) {
        const auto& set = b[k];
        bool has = set.base_player == p && set.base_action == j;
        for (const auto& c : set.context) has = has || (c.player == p && c.action == j);
        if (has) covered += x[k];
      }
      h += a * (claimed - covered) * (claimed - covered);
    }
  }
  std::int64_t selected = 0;
  for (std::size_t k = 0; k < b.c_b(); ++k) selected += x[k];
  h += a * (n - selected) * (n - selected);
  return h;
}

/// Small hand-written games.
inline GraphicalGame two_player(std::vector<Payoff> row, std::vector<Payoff> col, int actions = 2) {
  // player 1's table is indexed (own action, player 0's action)
  return GraphicalGame({actions, actions}, {{0, 1}, {1, 0}}, {std::move(row), std::move(col)});
}

inline GraphicalGame coordination() { return two_player({1, 0, 0, 1}, {1, 0, 0, 1}); }
inline GraphicalGame matching_pennies() { return two_player({1, 0, 0, 1}, {0, 1, 1, 0}); }
inline GraphicalGame constant_game() { return two_player({5, 5, 5, 5}, {5, 5, 5, 5}); }

/// Example with A (2 actions) adjacent to B (3 actions) and C (2 actions).
/// Only A's table matters for its best responses; B and C are indifferent.
inline GraphicalGame three_player_example() {
  std::vector<Payoff> a_table{4, 1, 2, 2, 1, 4,   // A0 against B0C0 B0C1 B1C0 B1C1 B2C0 B2C1
                              1, 3, 2, 1, 2, 2};  // A1
  return GraphicalGame({2, 3, 2}, {{0, 1, 2}, {1, 0}, {2, 0}},
                       {a_table, std::vector<Payoff>(6, 0), std::vector<Payoff>(4, 0)});
}

/// Random game on a random forest with 2..3 actions and payoffs in 0..max_payoff
/// (small ranges produce ties).
inline GraphicalGame random_forest_game(std::mt19937_64& rng, int n, int max_payoff, double edge_prob = 0.7) {
  std::vector<std::vector<Player>> adj(n);
  for (Player p = 1; p < n; ++p) {
    if (std::uniform_real_distribution<double>(0, 1)(rng) < edge_prob) {
      const Player parent = std::uniform_int_distribution<Player>(0, p - 1)(rng);
      adj[p].push_back(parent);
      adj[parent].push_back(p);
    }
  }
  std::vector<int> actions(n);
  for (auto& a : actions) a = std::uniform_int_distribution<int>(2, 3)(rng);
  std::vector<std::vector<Player>> hoods(n);
  std::vector<std::vector<Payoff>> tables(n);
  for (Player p = 0; p < n; ++p) {
    std::sort(adj[p].begin(), adj[p].end());
    hoods[p].push_back(p);
    hoods[p].insert(hoods[p].end(), adj[p].begin(), adj[p].end());
    std::size_t size = 1;
    for (Player q : hoods[p]) size *= static_cast<std::size_t>(actions[q]);
    tables[p].resize(size);
    for (auto& v : tables[p]) v = std::uniform_int_distribution<Payoff>(0, max_payoff)(rng);
  }
  return GraphicalGame(actions, hoods, tables);
}

/// Number of variables of the truncated model, counted from the oracle's
/// pointed sets: one selector per set plus one multiplicity variable per
/// (player, action, m) with m up to the number of sets assigning that action.
inline std::size_t truncated_var_count(const GraphicalGame& game) {
  std::size_t sets = 0;
  std::size_t members = 0;
  for (Player p = 0; p < game.num_players(); ++p) {
    const auto ps = pointed_sets(game, p);
    sets += ps.size();
    for (const auto& s : ps) members += s.size();
  }
  return sets + members;
}

/// Random forest game whose truncated model has at most `max_vars` variables.
inline GraphicalGame small_model_game(std::mt19937_64& rng, std::size_t max_vars = 24) {
  while (true) {
    const int n = std::uniform_int_distribution<int>(2, 4)(rng);
    auto g = random_forest_game(rng, n, 3, 0.5);
    if (truncated_var_count(g) <= max_vars) return g;
  }
}

}  // namespace oracle
