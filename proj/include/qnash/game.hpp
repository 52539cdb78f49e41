#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qnash {

using Player = int;
using Action = int;
using Payoff = std::int64_t;

/// Action chosen by every player, indexed by player.
using GlobalProfile = std::vector<Action>;

/// Actions of the members of one player's neighborhood, in neighborhood order.
struct LocalProfile {
  Player owner = 0;
  std::vector<Action> assignment;

  bool operator==(const LocalProfile&) const = default;
};

enum class GameErrc {
  invalid_argument,
  malformed_file,
  neighborhood_order,
  asymmetric_neighborhood,
  payoff_table_size,
  out_of_range,
};

class GameError : public std::runtime_error {
 public:
  GameError(GameErrc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  GameErrc code() const noexcept { return code_; }

 private:
  GameErrc code_;
};

/// An n-player graphical game: an undirected dependency graph plus one local
/// payoff table per player.
///
/// Neighborhood lists start with the owning player, followed by the other
/// members in ascending index order. The payoff table of player p is stored
/// row-major over that order, so p's own action is the outermost index.
/// Instances are validated on construction and immutable afterwards.
class GraphicalGame {
 public:
  GraphicalGame(std::vector<int> actions,
                std::vector<std::vector<Player>> neighborhoods,
                std::vector<std::vector<Payoff>> payoffs);

  int num_players() const { return static_cast<int>(actions_.size()); }
  int num_actions(Player p) const { return actions_.at(p); }
  const std::vector<int>& actions() const { return actions_; }
  std::span<const Player> neighborhood(Player p) const { return neighborhoods_.at(p); }
  const std::vector<std::vector<Player>>& neighborhoods() const { return neighborhoods_; }
  std::span<const Payoff> payoff_table(Player p) const { return payoffs_.at(p); }
  const std::vector<std::vector<Payoff>>& payoff_tables() const { return payoffs_; }

  /// Largest neighborhood size minus one (the node degree of the graph).
  int max_degree() const;
  /// Total number of stored payoff entries.
  std::size_t representation_size() const;

  /// Row-major offset of a local profile inside the owner's payoff table.
  std::size_t local_index(const LocalProfile& local) const;
  /// Offset of the restriction of `profile` to N_G(p).
  std::size_t local_index(Player p, std::span<const Action> profile) const;
  /// Stride of neighborhood member `slot` in player p's table.
  std::size_t stride(Player p, std::size_t slot) const { return strides_.at(p).at(slot); }

  LocalProfile restrict_to(Player p, std::span<const Action> profile) const;

  bool operator==(const GraphicalGame& other) const {
    return actions_ == other.actions_ && neighborhoods_ == other.neighborhoods_ &&
           payoffs_ == other.payoffs_;
  }

 private:
  std::vector<int> actions_;
  std::vector<std::vector<Player>> neighborhoods_;
  std::vector<std::vector<Payoff>> payoffs_;
  std::vector<std::vector<std::size_t>> strides_;
};

/// Throws GameError(out_of_range) unless `profile` is a valid global profile.
void check_profile(const GraphicalGame& game, std::span<const Action> profile);

/// M_p(s): payoff to p when everybody plays `profile`.
Payoff payoff(const GraphicalGame& game, Player p, std::span<const Action> profile);

enum class Topology { tree, circle, road };

Topology parse_topology(std::string_view name);
std::string_view to_string(Topology topology);

/// Random game on the given dependency graph with payoffs uniform in 0..15.
///
///   circle: simple cycle 0-1-...-(n-1)-0, n >= 3
///   tree:   complete binary tree in level order (parent of i is (i-1)/2)
///   road:   2 x (n/2) ladder; lane 0 holds players 0..n/2-1, lane 1 the rest,
///           rung c joins c and n/2+c. n must be even.
GraphicalGame generate_game(Topology topology, int num_players, int actions_per_player,
                            std::uint64_t seed);

std::string to_json(const GraphicalGame& game);
GraphicalGame game_from_json(std::string_view text);
void save_game(const std::filesystem::path& path, const GraphicalGame& game);
GraphicalGame load_game(const std::filesystem::path& path);

}  // namespace qnash
