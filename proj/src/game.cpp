#include "qnash/game.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

namespace qnash {

namespace {

std::string player_str(Player p) { return "player " + std::to_string(p); }

}  // namespace

GraphicalGame::GraphicalGame(std::vector<int> actions,
                             std::vector<std::vector<Player>> neighborhoods,
                             std::vector<std::vector<Payoff>> payoffs)
    : actions_(std::move(actions)),
      neighborhoods_(std::move(neighborhoods)),
      payoffs_(std::move(payoffs)) {
  const int n = num_players();
  if (n < 2) throw GameError(GameErrc::invalid_argument, "a game needs at least 2 players");
  if (static_cast<int>(neighborhoods_.size()) != n || static_cast<int>(payoffs_.size()) != n) {
    throw GameError(GameErrc::malformed_file,
                    "actions, neighborhoods and payoffs must have one entry per player");
  }
  for (Player p = 0; p < n; ++p) {
    if (actions_[p] < 2) {
      throw GameError(GameErrc::invalid_argument, player_str(p) + " needs at least 2 actions");
    }
  }
  for (Player p = 0; p < n; ++p) {
    const auto& nb = neighborhoods_[p];
    if (nb.empty() || nb.front() != p) {
      throw GameError(GameErrc::neighborhood_order,
                      "neighborhood of " + player_str(p) + " must start with the player itself");
    }
    for (std::size_t i = 1; i < nb.size(); ++i) {
      if (nb[i] < 0 || nb[i] >= n) {
        throw GameError(GameErrc::out_of_range,
                        "neighborhood of " + player_str(p) + " names unknown player " +
                            std::to_string(nb[i]));
      }
      if (nb[i] == p || (i > 1 && nb[i] <= nb[i - 1])) {
        throw GameError(GameErrc::neighborhood_order,
                        "neighbors of " + player_str(p) + " must be distinct and ascending");
      }
    }
  }
  for (Player p = 0; p < n; ++p) {
    for (std::size_t i = 1; i < neighborhoods_[p].size(); ++i) {
      const Player q = neighborhoods_[p][i];
      const auto& other = neighborhoods_[q];
      if (!std::binary_search(other.begin() + 1, other.end(), p)) {
        throw GameError(GameErrc::asymmetric_neighborhood,
                        player_str(q) + " is a neighbor of " + player_str(p) +
                            " but not the other way round");
      }
    }
  }
  strides_.resize(n);
  for (Player p = 0; p < n; ++p) {
    const auto& nb = neighborhoods_[p];
    auto& st = strides_[p];
    st.assign(nb.size(), 1);
    for (std::size_t i = nb.size() - 1; i > 0; --i) st[i - 1] = st[i] * actions_[nb[i]];
    const std::size_t expected = st[0] * actions_[p];
    if (payoffs_[p].size() != expected) {
      throw GameError(GameErrc::payoff_table_size,
                      "payoff table of " + player_str(p) + " has " +
                          std::to_string(payoffs_[p].size()) + " entries, expected " +
                          std::to_string(expected));
    }
  }
}

int GraphicalGame::max_degree() const {
  std::size_t d = 0;
  for (const auto& nb : neighborhoods_) d = std::max(d, nb.size() - 1);
  return static_cast<int>(d);
}

std::size_t GraphicalGame::representation_size() const {
  std::size_t total = 0;
  for (const auto& t : payoffs_) total += t.size();
  return total;
}

std::size_t GraphicalGame::local_index(const LocalProfile& local) const {
  const auto& nb = neighborhoods_.at(local.owner);
  if (local.assignment.size() != nb.size()) {
    throw GameError(GameErrc::out_of_range, "local profile has the wrong length");
  }
  std::size_t idx = 0;
  for (std::size_t i = 0; i < nb.size(); ++i) {
    const Action a = local.assignment[i];
    if (a < 0 || a >= actions_[nb[i]]) {
      throw GameError(GameErrc::out_of_range, "action out of range in local profile");
    }
    idx += strides_[local.owner][i] * static_cast<std::size_t>(a);
  }
  return idx;
}

std::size_t GraphicalGame::local_index(Player p, std::span<const Action> profile) const {
  const auto& nb = neighborhoods_[p];
  const auto& st = strides_[p];
  std::size_t idx = 0;
  for (std::size_t i = 0; i < nb.size(); ++i) idx += st[i] * static_cast<std::size_t>(profile[nb[i]]);
  return idx;
}

LocalProfile GraphicalGame::restrict_to(Player p, std::span<const Action> profile) const {
  LocalProfile local{p, {}};
  for (Player q : neighborhoods_.at(p)) local.assignment.push_back(profile[q]);
  return local;
}

void check_profile(const GraphicalGame& game, std::span<const Action> profile) {
  if (static_cast<int>(profile.size()) != game.num_players()) {
    throw GameError(GameErrc::out_of_range, "profile length does not match player count");
  }
  for (Player p = 0; p < game.num_players(); ++p) {
    if (profile[p] < 0 || profile[p] >= game.num_actions(p)) {
      throw GameError(GameErrc::out_of_range, "action of " + player_str(p) + " out of range");
    }
  }
}

Payoff payoff(const GraphicalGame& game, Player p, std::span<const Action> profile) {
  if (p < 0 || p >= game.num_players()) {
    throw GameError(GameErrc::out_of_range, player_str(p) + " does not exist");
  }
  check_profile(game, profile);
  return game.payoff_table(p)[game.local_index(p, profile)];
}

Topology parse_topology(std::string_view name) {
  if (name == "tree") return Topology::tree;
  if (name == "circle") return Topology::circle;
  if (name == "road") return Topology::road;
  throw GameError(GameErrc::invalid_argument, "unknown topology '" + std::string(name) + "'");
}

std::string_view to_string(Topology topology) {
  switch (topology) {
    case Topology::tree: return "tree";
    case Topology::circle: return "circle";
    case Topology::road: return "road";
  }
  return "?";
}

GraphicalGame generate_game(Topology topology, int num_players, int actions_per_player,
                            std::uint64_t seed) {
  const int n = num_players;
  if (n < 2) throw GameError(GameErrc::invalid_argument, "a game needs at least 2 players");
  if (actions_per_player < 2) {
    throw GameError(GameErrc::invalid_argument, "every player needs at least 2 actions");
  }

  std::vector<std::set<Player>> adj(n);
  auto connect = [&](Player a, Player b) {
    adj[a].insert(b);
    adj[b].insert(a);
  };
  switch (topology) {
    case Topology::circle:
      if (n < 3) throw GameError(GameErrc::invalid_argument, "circle requires n >= 3");
      for (Player p = 0; p < n; ++p) connect(p, (p + 1) % n);
      break;
    case Topology::tree:
      for (Player p = 1; p < n; ++p) connect(p, (p - 1) / 2);
      break;
    case Topology::road: {
      if (n % 2 != 0) throw GameError(GameErrc::invalid_argument, "road requires even n");
      const int lane = n / 2;
      for (int c = 0; c < lane; ++c) {
        connect(c, lane + c);
        if (c + 1 < lane) {
          connect(c, c + 1);
          connect(lane + c, lane + c + 1);
        }
      }
      break;
    }
  }

  std::vector<int> actions(n, actions_per_player);
  std::vector<std::vector<Player>> neighborhoods(n);
  std::vector<std::vector<Payoff>> payoffs(n);
  std::mt19937_64 rng(seed);
  for (Player p = 0; p < n; ++p) {
    neighborhoods[p].push_back(p);
    neighborhoods[p].insert(neighborhoods[p].end(), adj[p].begin(), adj[p].end());
    std::size_t size = 1;
    for (std::size_t i = 0; i < neighborhoods[p].size(); ++i) size *= actions_per_player;
    payoffs[p].resize(size);
    // top four bits of the 64-bit draw: exactly uniform on 0..15
    for (auto& v : payoffs[p]) v = static_cast<Payoff>(rng() >> 60);
  }
  return GraphicalGame(std::move(actions), std::move(neighborhoods), std::move(payoffs));
}

std::string to_json(const GraphicalGame& game) {
  nlohmann::ordered_json j;
  j["n"] = game.num_players();
  j["actions"] = game.actions();
  j["neighborhoods"] = game.neighborhoods();
  j["payoffs"] = game.payoff_tables();
  return j.dump() + "\n";
}

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw GameError(GameErrc::malformed_file, "malformed game file: " + what);
}

template <typename T>
std::vector<T> int_list(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array()) malformed(what + " must be an array");
  std::vector<T> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number_integer()) malformed(what + " must contain only integers");
    out.push_back(v.get<T>());
  }
  return out;
}

template <typename T>
std::vector<std::vector<T>> int_lists(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array()) malformed(what + " must be an array of arrays");
  std::vector<std::vector<T>> out;
  for (const auto& row : j) out.push_back(int_list<T>(row, what));
  return out;
}

}  // namespace

GraphicalGame game_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    malformed(e.what());
  }
  if (!j.is_object()) malformed("top level must be an object");
  for (const char* key : {"n", "actions", "neighborhoods", "payoffs"}) {
    if (!j.contains(key)) malformed(std::string("missing key '") + key + "'");
  }
  if (!j["n"].is_number_integer()) malformed("'n' must be an integer");
  const auto n = j["n"].get<std::int64_t>();
  auto actions = int_list<int>(j["actions"], "actions");
  auto neighborhoods = int_lists<Player>(j["neighborhoods"], "neighborhoods");
  auto payoffs = int_lists<Payoff>(j["payoffs"], "payoffs");
  if (n != static_cast<std::int64_t>(actions.size())) malformed("'n' disagrees with 'actions'");
  return GraphicalGame(std::move(actions), std::move(neighborhoods), std::move(payoffs));
}

void save_game(const std::filesystem::path& path, const GraphicalGame& game) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << to_json(game);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

GraphicalGame load_game(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return game_from_json(buf.str());
}

}  // namespace qnash
