#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "qnash/game.hpp"

namespace qnash {

struct Assignment {
  Player player = 0;
  Action action = 0;

  auto operator<=>(const Assignment&) const = default;
};

/// One best-response combination of a base player: the base action together
/// with the actions of every other member of N_G(base) it responds to.
struct PointedSet {
  Player base_player = 0;
  Action base_action = 0;
  /// Neighbors other than the base, in neighborhood order.
  std::vector<Assignment> context;

  /// Base assignment followed by the context.
  std::vector<Assignment> members() const;

  bool operator==(const PointedSet&) const = default;
};

/// The superset B of all players' pointed sets, grouped by base player.
class BestResponseCollection {
 public:
  BestResponseCollection() = default;
  BestResponseCollection(int num_players, std::vector<PointedSet> sets);

  int num_players() const { return static_cast<int>(offsets_.empty() ? 0 : offsets_.size() - 1); }
  /// C_B.
  std::size_t c_b() const { return sets_.size(); }
  const std::vector<PointedSet>& sets() const { return sets_; }
  const PointedSet& operator[](std::size_t k) const { return sets_[k]; }
  /// BR_{M_p}: the pointed sets whose base is p.
  std::span<const PointedSet> of_player(Player p) const;
  /// Index of the first set whose base is p.
  std::size_t first_of(Player p) const { return offsets_.at(p); }

 private:
  std::vector<PointedSet> sets_;
  std::vector<std::size_t> offsets_;
};

/// All pointed sets of player p. Contexts are visited in lexicographic order
/// over the neighborhood; every maximizing action is emitted, in ascending order.
std::vector<PointedSet> best_responses(const GraphicalGame& game, Player p);

BestResponseCollection collect_b(const GraphicalGame& game);

/// One JSON object per line: {"base":p,"action":j,"context":{"q":a,...}}.
void write_jsonl(std::ostream& out, const BestResponseCollection& b);

}  // namespace qnash
