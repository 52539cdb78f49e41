#include "qnash/qubo.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "qnash/baselines.hpp"

namespace qnash {

QuboModel::QuboModel(std::size_t num_vars, Energy offset, std::vector<Energy> linear,
                     std::vector<QuadraticTerm> quadratic)
    : offset_(offset), linear_(std::move(linear)) {
  if (linear_.size() != num_vars) throw std::invalid_argument("linear term count != num_vars");
  for (auto& t : quadratic) {
    if (t.i == t.j) throw std::invalid_argument("diagonal entries belong to the linear part");
    if (t.i >= num_vars || t.j >= num_vars) throw std::invalid_argument("variable index out of range");
    if (t.i > t.j) std::swap(t.i, t.j);
  }
  std::sort(quadratic.begin(), quadratic.end(),
            [](const QuadraticTerm& a, const QuadraticTerm& b) {
              return a.i != b.i ? a.i < b.i : a.j < b.j;
            });
  for (const auto& t : quadratic) {
    if (!quadratic_.empty() && quadratic_.back().i == t.i && quadratic_.back().j == t.j) {
      quadratic_.back().value += t.value;
    } else {
      quadratic_.push_back(t);
    }
  }
  std::erase_if(quadratic_, [](const QuadraticTerm& t) { return t.value == 0; });

  std::vector<std::size_t> degree(num_vars, 0);
  for (const auto& t : quadratic_) {
    ++degree[t.i];
    ++degree[t.j];
  }
  adj_begin_.assign(num_vars + 1, 0);
  for (std::size_t v = 0; v < num_vars; ++v) adj_begin_[v + 1] = adj_begin_[v] + degree[v];
  adjacency_.resize(adj_begin_[num_vars]);
  std::vector<std::size_t> fill(adj_begin_.begin(), adj_begin_.end() - 1);
  for (const auto& t : quadratic_) {
    adjacency_[fill[t.i]++] = {t.j, t.value};
    adjacency_[fill[t.j]++] = {t.i, t.value};
  }
}

Energy QuboModel::max_abs_coefficient() const {
  Energy m = 0;
  for (Energy v : linear_) m = std::max(m, v < 0 ? -v : v);
  for (const auto& t : quadratic_) m = std::max(m, t.value < 0 ? -t.value : t.value);
  return m;
}

Energy QuboModel::energy(std::span<const std::uint8_t> x) const {
  if (x.size() != num_vars()) {
    throw std::invalid_argument("assignment has " + std::to_string(x.size()) +
                                " variables, model has " + std::to_string(num_vars()));
  }
  Energy e = offset_;
  for (std::size_t i = 0; i < linear_.size(); ++i) {
    if (x[i]) e += linear_[i];
  }
  for (const auto& t : quadratic_) {
    if (x[t.i] && x[t.j]) e += t.value;
  }
  return e;
}

Energy QuboModel::local_field(std::span<const std::uint8_t> x, std::size_t i) const {
  Energy f = linear_[i];
  for (const auto& c : neighbors(i)) {
    if (x[c.other]) f += c.value;
  }
  return f;
}

QuboModel::Builder::Builder(std::size_t num_vars) : num_vars_(num_vars), linear_(num_vars, 0) {}

void QuboModel::Builder::add_linear(std::size_t i, Energy v) { linear_.at(i) += v; }

void QuboModel::Builder::add_quadratic(std::size_t i, std::size_t j, Energy v) {
  if (i == j) {
    add_linear(i, v);
    return;
  }
  if (i > j) std::swap(i, j);
  pending_.push_back({i, j, v});
}

void QuboModel::Builder::add_squared(Energy weight, Energy constant,
                                     std::span<const std::pair<std::size_t, Energy>> terms) {
  offset_ += weight * constant * constant;
  for (std::size_t a = 0; a < terms.size(); ++a) {
    const auto [va, ca] = terms[a];
    add_linear(va, weight * (ca * ca + 2 * constant * ca));
    for (std::size_t b = a + 1; b < terms.size(); ++b) {
      add_quadratic(va, terms[b].first, weight * 2 * ca * terms[b].second);
    }
  }
}

QuboModel QuboModel::Builder::build() && {
  return QuboModel(num_vars_, offset_, std::move(linear_), std::move(pending_));
}

Energy energy(const QuboModel& model, std::span<const std::uint8_t> x) { return model.energy(x); }

VariableIndex::VariableIndex(const BestResponseCollection& b, const GraphicalGame& game,
                             bool truncate) {
  const int n = game.num_players();
  coverage_.resize(n);
  for (Player p = 0; p < n; ++p) coverage_[p].resize(game.num_actions(p));

  members_.reserve(b.c_b());
  for (std::size_t k = 0; k < b.c_b(); ++k) {
    members_.push_back(b[k].members());
    for (const auto& m : members_.back()) {
      if (m.player < 0 || m.player >= n || m.action < 0 || m.action >= game.num_actions(m.player)) {
        throw std::invalid_argument("pointed set does not belong to this game");
      }
      coverage_[m.player][m.action].push_back(k);
    }
  }

  range_.resize(n);
  first_.resize(n);
  std::size_t next = b.c_b();
  for (Player p = 0; p < n; ++p) {
    range_[p].assign(game.num_actions(p), 0);
    first_[p].assign(game.num_actions(p), 0);
    for (Action j = 0; j < game.num_actions(p); ++j) {
      const int range = truncate ? coverage(p, j) : static_cast<int>(b.c_b());
      range_[p][j] = range;
      first_[p][j] = next;
      for (int m = 1; m <= range; ++m) multiplicity_.push_back({p, j, m});
      next += static_cast<std::size_t>(range);
    }
  }
}

std::size_t VariableIndex::multiplicity_var(Player p, Action j, int m) const {
  if (m < 1 || m > range_.at(p).at(j)) throw std::out_of_range("no such multiplicity variable");
  return first_[p][j] + static_cast<std::size_t>(m - 1);
}

CompiledQubo build_qubo(const BestResponseCollection& b, const GraphicalGame& game,
                        const BuildOptions& options) {
  if (options.penalty < 1) throw std::invalid_argument("penalty must be a positive integer");
  const int n = game.num_players();
  VariableIndex index(b, game, options.truncate_multiplicity);
  QuboModel::Builder builder(index.total_vars());
  const Energy a = options.penalty;
  std::vector<std::pair<std::size_t, Energy>> terms;

  // each player takes exactly one (action, count) pair
  for (Player p = 0; p < n; ++p) {
    terms.clear();
    for (Action j = 0; j < game.num_actions(p); ++j) {
      for (int m = 1; m <= index.multiplicity_range(p, j); ++m) {
        terms.emplace_back(index.multiplicity_var(p, j, m), -1);
      }
    }
    builder.add_squared(a, 1, terms);
  }

  // the claimed count of (p, j) equals the number of selected sets covering it
  for (Player p = 0; p < n; ++p) {
    for (Action j = 0; j < game.num_actions(p); ++j) {
      terms.clear();
      for (int m = 1; m <= index.multiplicity_range(p, j); ++m) {
        terms.emplace_back(index.multiplicity_var(p, j, m), m);
      }
      for (std::size_t k : index.covering(p, j)) terms.emplace_back(k, -1);
      if (!terms.empty()) builder.add_squared(a, 0, terms);
    }
  }

  // exactly n sets are selected
  terms.clear();
  for (std::size_t k = 0; k < index.num_selectors(); ++k) terms.emplace_back(k, -1);
  builder.add_squared(a, n, terms);

  return CompiledQubo{std::move(builder).build(), std::move(index), a, n};
}

std::optional<GlobalProfile> decode(const CompiledQubo& compiled, std::span<const std::uint8_t> x,
                                    const BestResponseCollection& b, const GraphicalGame& game) {
  if (compiled.model.energy(x) != 0) return std::nullopt;
  GlobalProfile profile(game.num_players(), -1);
  for (std::size_t k = 0; k < compiled.index.num_selectors(); ++k) {
    if (!x[k]) continue;
    for (const auto& m : b[k].members()) {
      if (profile[m.player] != -1 && profile[m.player] != m.action) {
        throw std::logic_error("zero-energy assignment selects conflicting pointed sets");
      }
      profile[m.player] = m.action;
    }
  }
  if (std::find(profile.begin(), profile.end(), -1) != profile.end()) {
    throw std::logic_error("zero-energy assignment leaves a player without an action");
  }
  if (!is_pne(game, profile)) {
    throw std::logic_error("zero-energy assignment decodes to a profile that is not a PNE");
  }
  return profile;
}

}  // namespace qnash
