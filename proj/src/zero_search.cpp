#include <chrono>
#include <stdexcept>

#include "qnash/solvers.hpp"

namespace qnash {

namespace {

// Branch and bound over the selector bits of a compiled model, pruning every
// node that cannot be completed to a zero-energy assignment:
//  * two selected sets that disagree on some player q force two multiplicity
//    variables of q to 1 (term one is then >= 1);
//  * distinct sets with the same base always disagree somewhere, so at most
//    one set per base player can be selected, and with exactly n selected
//    (term three) every player must own exactly one;
//  * a player whose every action has lost all covering sets cannot satisfy
//    term one.
// At a leaf the multiplicity bits are forced by the selection, and the full
// assignment is checked against the QUBO itself.
class ZeroSearch {
 public:
  explicit ZeroSearch(const CompiledQubo& compiled)
      : c_(compiled), idx_(compiled.index), n_(compiled.num_players) {
    offset_.resize(n_ + 1, 0);
    for (Player p = 0; p < n_; ++p) offset_[p + 1] = offset_[p] + idx_.num_actions(p);
    vmin_.assign(offset_[n_], 0);
    vmax_.assign(offset_[n_], 0);
    for (Player p = 0; p < n_; ++p) {
      for (Action a = 0; a < idx_.num_actions(p); ++a) vmax_[slot(p, a)] = idx_.coverage(p, a);
    }
    remaining_.assign(n_, 0);
    chosen_.assign(n_, false);
    for (std::size_t k = 0; k < idx_.num_selectors(); ++k) ++remaining_[base(k)];
    selectors_.assign(idx_.num_selectors(), 0);
  }

  SampleSet run() {
    // a player without any pointed set can never be covered
    for (Player p = 0; p < n_; ++p) {
      if (remaining_[p] == 0) return std::move(out_);
    }
    descend(0);
    out_.normalize();
    return std::move(out_);
  }

 private:
  std::size_t slot(Player p, Action a) const { return offset_[p] + static_cast<std::size_t>(a); }
  Player base(std::size_t k) const { return idx_.selector_members(k).front().player; }

  bool player_ok(Player p) const {
    int covered = 0;
    bool reachable = false;
    for (Action a = 0; a < idx_.num_actions(p); ++a) {
      covered += vmin_[slot(p, a)] > 0;
      reachable = reachable || vmax_[slot(p, a)] > 0;
    }
    return covered == 1 || (covered == 0 && reachable);
  }

  bool members_ok(std::size_t k) const {
    for (const auto& m : idx_.selector_members(k)) {
      if (!player_ok(m.player)) return false;
    }
    return true;
  }

  void descend(std::size_t k) {
    if (k == idx_.num_selectors()) {
      leaf();
      return;
    }
    const Player p = base(k);
    const auto members = idx_.selector_members(k);

    if (!chosen_[p]) {
      for (const auto& m : members) ++vmin_[slot(m.player, m.action)];
      chosen_[p] = true;
      --remaining_[p];
      selectors_[k] = 1;
      if (members_ok(k)) descend(k + 1);
      selectors_[k] = 0;
      ++remaining_[p];
      chosen_[p] = false;
      for (const auto& m : members) --vmin_[slot(m.player, m.action)];
    }

    for (const auto& m : members) --vmax_[slot(m.player, m.action)];
    --remaining_[p];
    if ((chosen_[p] || remaining_[p] > 0) && members_ok(k)) descend(k + 1);
    ++remaining_[p];
    for (const auto& m : members) ++vmax_[slot(m.player, m.action)];
  }

  void leaf() {
    Bits x(c_.model.num_vars(), 0);
    std::copy(selectors_.begin(), selectors_.end(), x.begin());
    for (Player p = 0; p < n_; ++p) {
      for (Action a = 0; a < idx_.num_actions(p); ++a) {
        const int count = vmin_[slot(p, a)];
        if (count > 0) x[idx_.multiplicity_var(p, a, count)] = 1;
      }
    }
    const Energy e = c_.model.energy(x);
    if (e != 0) throw std::logic_error("consistent selection has nonzero energy; the model is miscompiled");
    out_.add(std::move(x), e);
  }

  const CompiledQubo& c_;
  const VariableIndex& idx_;
  const int n_;
  std::vector<std::size_t> offset_;
  std::vector<int> vmin_;
  std::vector<int> vmax_;
  std::vector<int> remaining_;
  std::vector<bool> chosen_;
  Bits selectors_;
  SampleSet out_;
};

}  // namespace

SampleSet enumerate_zero_energy(const CompiledQubo& compiled) {
  const auto start = std::chrono::steady_clock::now();
  auto out = ZeroSearch(compiled).run();
  out.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace qnash
