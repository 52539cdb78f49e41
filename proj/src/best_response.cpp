#include "qnash/best_response.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace qnash {

std::vector<Assignment> PointedSet::members() const {
  std::vector<Assignment> out;
  out.reserve(context.size() + 1);
  out.push_back({base_player, base_action});
  out.insert(out.end(), context.begin(), context.end());
  return out;
}

BestResponseCollection::BestResponseCollection(int num_players, std::vector<PointedSet> sets)
    : sets_(std::move(sets)) {
  offsets_.assign(num_players + 1, 0);
  for (std::size_t k = 0; k < sets_.size(); ++k) {
    const Player p = sets_[k].base_player;
    if (p < 0 || p >= num_players) throw std::invalid_argument("pointed set with unknown base player");
    if (k > 0 && p < sets_[k - 1].base_player) {
      throw std::invalid_argument("pointed sets must be grouped by ascending base player");
    }
    ++offsets_[p + 1];
  }
  for (int p = 0; p < num_players; ++p) offsets_[p + 1] += offsets_[p];
}

std::span<const PointedSet> BestResponseCollection::of_player(Player p) const {
  const auto begin = offsets_.at(p);
  const auto end = offsets_.at(p + 1);
  return std::span<const PointedSet>(sets_).subspan(begin, end - begin);
}

std::vector<PointedSet> best_responses(const GraphicalGame& game, Player p) {
  if (p < 0 || p >= game.num_players()) {
    throw GameError(GameErrc::out_of_range, "player " + std::to_string(p) + " does not exist");
  }
  const auto nb = game.neighborhood(p);
  const auto table = game.payoff_table(p);
  const std::size_t own_stride = game.stride(p, 0);
  const int own_actions = game.num_actions(p);

  std::vector<PointedSet> out;
  // odometer over the context; the last neighbor varies fastest
  std::vector<Action> ctx(nb.size() - 1, 0);
  std::size_t offset = 0;  // table offset of the context with own action 0
  while (true) {
    Payoff best = table[offset];
    for (Action a = 1; a < own_actions; ++a) best = std::max(best, table[a * own_stride + offset]);
    for (Action a = 0; a < own_actions; ++a) {
      if (table[a * own_stride + offset] != best) continue;
      PointedSet s{p, a, {}};
      s.context.reserve(ctx.size());
      for (std::size_t i = 0; i < ctx.size(); ++i) s.context.push_back({nb[i + 1], ctx[i]});
      out.push_back(std::move(s));
    }

    std::size_t i = ctx.size();
    while (i > 0) {
      --i;
      const std::size_t st = game.stride(p, i + 1);
      if (++ctx[i] < game.num_actions(nb[i + 1])) {
        offset += st;
        break;
      }
      offset -= st * static_cast<std::size_t>(ctx[i] - 1);
      ctx[i] = 0;
      if (i == 0) return out;
    }
    if (ctx.empty()) return out;
  }
}

BestResponseCollection collect_b(const GraphicalGame& game) {
  std::vector<PointedSet> all;
  for (Player p = 0; p < game.num_players(); ++p) {
    auto br = best_responses(game, p);
    all.insert(all.end(), std::make_move_iterator(br.begin()), std::make_move_iterator(br.end()));
  }
  return BestResponseCollection(game.num_players(), std::move(all));
}

void write_jsonl(std::ostream& out, const BestResponseCollection& b) {
  for (const auto& s : b.sets()) {
    nlohmann::ordered_json j;
    j["base"] = s.base_player;
    j["action"] = s.base_action;
    j["context"] = nlohmann::ordered_json::object();
    for (const auto& c : s.context) j["context"][std::to_string(c.player)] = c.action;
    out << j.dump() << '\n';
  }
}

}  // namespace qnash
