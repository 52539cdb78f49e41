#include "qnash/baselines.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace qnash {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

double combination_count(const BestResponseCollection& b) {
  double total = 1.0;
  for (Player p = 0; p < b.num_players(); ++p) total *= static_cast<double>(b.of_player(p).size());
  return total;
}

/// Writes the union of `chosen` into `profile`; false on a conflict.
bool unite(std::span<const PointedSet* const> chosen, GlobalProfile& profile) {
  std::fill(profile.begin(), profile.end(), -1);
  for (const PointedSet* s : chosen) {
    auto put = [&](Player q, Action a) {
      if (profile[q] != -1 && profile[q] != a) return false;
      profile[q] = a;
      return true;
    };
    if (!put(s->base_player, s->base_action)) return false;
    for (const auto& c : s->context) {
      if (!put(c.player, c.action)) return false;
    }
  }
  return std::find(profile.begin(), profile.end(), -1) == profile.end();
}

class PrunedSearch {
 public:
  PrunedSearch(const GraphicalGame& game, const BestResponseCollection& b, BaselineReport& report)
      : game_(game), b_(b), report_(report),
        profile_(game.num_players(), -1), refs_(game.num_players(), 0) {}

  void run(Player p) {
    if (p == game_.num_players()) {
      ++report_.combinations_examined;
      if (is_pne(game_, profile_)) found_.insert(profile_);
      return;
    }
    for (const auto& s : b_.of_player(p)) {
      if (!fits(s)) {
        ++report_.prefixes_pruned;
        continue;
      }
      apply(s, +1);
      run(p + 1);
      apply(s, -1);
    }
  }

  std::set<GlobalProfile> found_;

 private:
  bool fits(const PointedSet& s) const {
    if (refs_[s.base_player] && profile_[s.base_player] != s.base_action) return false;
    for (const auto& c : s.context) {
      if (refs_[c.player] && profile_[c.player] != c.action) return false;
    }
    return true;
  }

  void apply(const PointedSet& s, int delta) {
    auto touch = [&](Player q, Action a) {
      refs_[q] += delta;
      profile_[q] = refs_[q] ? a : -1;
    };
    touch(s.base_player, s.base_action);
    for (const auto& c : s.context) touch(c.player, c.action);
  }

  const GraphicalGame& game_;
  const BestResponseCollection& b_;
  BaselineReport& report_;
  GlobalProfile profile_;
  std::vector<int> refs_;
};

}  // namespace

bool is_pne(const GraphicalGame& game, std::span<const Action> profile) {
  check_profile(game, profile);
  for (Player p = 0; p < game.num_players(); ++p) {
    const auto table = game.payoff_table(p);
    const std::size_t idx = game.local_index(p, profile);
    const std::size_t stride = game.stride(p, 0);
    const std::size_t base = idx - stride * static_cast<std::size_t>(profile[p]);
    const Payoff current = table[idx];
    for (Action a = 0; a < game.num_actions(p); ++a) {
      if (table[base + stride * static_cast<std::size_t>(a)] > current) return false;
    }
  }
  return true;
}

BaselineReport oracle_pne(const GraphicalGame& game, std::uint64_t max_profiles) {
  const auto start = Clock::now();
  BaselineReport report;
  report.method = "oracle";
  double space = 1.0;
  for (int a : game.actions()) space *= a;
  report.combinations_total = space;
  if (space > static_cast<double>(max_profiles)) {
    throw CapExceeded("oracle: " + std::to_string(static_cast<unsigned long long>(space)) +
                      " profiles exceed the cap of " + std::to_string(max_profiles));
  }
  const int n = game.num_players();
  GlobalProfile s(n, 0);
  while (true) {
    ++report.combinations_examined;
    if (is_pne(game, s)) report.pne_found.push_back(s);
    int p = n - 1;
    while (p >= 0 && ++s[p] == game.num_actions(p)) s[p--] = 0;
    if (p < 0) break;
  }
  report.elapsed_ms = ms_since(start);
  return report;
}

BaselineReport brute_force_sets(const GraphicalGame& game, const BruteForceOptions& options) {
  const auto start = Clock::now();
  const auto b = collect_b(game);
  auto report = brute_force_sets(game, b, options);
  report.elapsed_ms = ms_since(start);
  return report;
}

BaselineReport brute_force_sets(const GraphicalGame& game, const BestResponseCollection& b,
                                const BruteForceOptions& options) {
  const auto start = Clock::now();
  BaselineReport report;
  report.method = options.prune ? "bf" : "bf-unpruned";
  report.combinations_total = combination_count(b);
  if (options.max_combinations && report.combinations_total > *options.max_combinations) {
    throw CapExceeded("brute force: " + std::to_string(report.combinations_total) +
                      " combinations exceed the cap");
  }
  const int n = game.num_players();

  if (options.prune) {
    PrunedSearch search(game, b, report);
    search.run(0);
    report.pne_found.assign(search.found_.begin(), search.found_.end());
  } else {
    std::set<GlobalProfile> found;
    std::vector<std::size_t> choice(n, 0);
    std::vector<const PointedSet*> chosen(n);
    for (Player p = 0; p < n; ++p) chosen[p] = &b.of_player(p)[0];
    GlobalProfile profile(n, -1);
    while (true) {
      ++report.combinations_examined;
      if (unite(chosen, profile) && is_pne(game, profile)) found.insert(profile);
      int p = n - 1;
      for (; p >= 0; --p) {
        const auto sets = b.of_player(p);
        if (++choice[p] < sets.size()) {
          chosen[p] = &sets[choice[p]];
          break;
        }
        choice[p] = 0;
        chosen[p] = &sets[0];
      }
      if (p < 0) break;
    }
    report.pne_found.assign(found.begin(), found.end());
  }
  report.elapsed_ms = ms_since(start);
  return report;
}

BaselineReport random_search(const GraphicalGame& game, const RandomSearchOptions& options) {
  const auto start = Clock::now();
  const auto headroom = Clock::time_point::max() - start;
  const auto deadline = options.timeout >= headroom ? Clock::time_point::max()
                                                    : start + std::chrono::duration_cast<Clock::duration>(options.timeout);
  BaselineReport report;
  report.method = "rs";
  std::set<GlobalProfile> found;
  if (options.timeout.count() > 0) {
    const auto b = collect_b(game);
    report.combinations_total = combination_count(b);
    const int n = game.num_players();
    std::mt19937_64 rng(options.seed);
    std::vector<const PointedSet*> chosen(n);
    GlobalProfile profile(n, -1);
    for (std::uint64_t sample = 0;; ++sample) {
      if (options.max_samples && sample >= *options.max_samples) break;
      if (sample % 64 == 0 && Clock::now() >= deadline) break;
      for (Player p = 0; p < n; ++p) {
        const auto sets = b.of_player(p);
        std::uniform_int_distribution<std::size_t> pick(0, sets.size() - 1);
        chosen[p] = &sets[pick(rng)];
      }
      ++report.combinations_examined;
      if (unite(chosen, profile) && is_pne(game, profile)) found.insert(profile);
    }
  }
  report.pne_found.assign(found.begin(), found.end());
  report.elapsed_ms = ms_since(start);
  return report;
}

}  // namespace qnash
