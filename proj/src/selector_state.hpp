#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "qnash/qubo.hpp"

namespace qnash::detail {

/// Selector bits of a compiled model with every multiplicity bit held at its
/// conditional minimum. With c_j the number of selected sets that assign
/// action j to player p, the cheapest multiplicity choice for p costs
///   sum_j c_j^2 - max_j c_j^2 + [all c_j = 0]
/// and the count term adds (n - selected)^2. Energies are in units of the
/// penalty, so the landscape does not depend on it.
class SelectorState {
 public:
  SelectorState(const CompiledQubo& compiled, Bits x)
      : idx_(&compiled.index), n_(compiled.num_players), x_(std::move(x)) {
    offset_.resize(n_ + 1, 0);
    for (Player p = 0; p < n_; ++p) offset_[p + 1] = offset_[p] + idx_->num_actions(p);
    slot_begin_.reserve(x_.size() + 1);
    slot_begin_.push_back(0);
    for (std::size_t k = 0; k < x_.size(); ++k) {
      for (const auto& m : idx_->selector_members(k)) slots_.push_back({m.player, slot(m.player, m.action)});
      slot_begin_.push_back(slots_.size());
    }
    count_.assign(offset_[n_], 0);
    for (std::size_t k = 0; k < x_.size(); ++k) {
      if (!x_[k]) continue;
      ++selected_;
      for (const auto& s : slots_of(k)) ++count_[s.slot];
    }
    cost_.resize(n_);
    for (Player p = 0; p < n_; ++p) {
      cost_[p] = cost_with(p, offset_[p], 0);
      energy_ += cost_[p];
    }
    energy_ += square(n_ - selected_);
  }

  Energy delta(std::size_t k) const {
    const int step = x_[k] ? -1 : 1;
    Energy d = square(n_ - selected_ - step) - square(n_ - selected_);
    for (const auto& s : slots_of(k)) d += cost_with(s.player, s.slot, step) - cost_[s.player];
    return d;
  }

  void flip(std::size_t k) {
    const int step = x_[k] ? -1 : 1;
    energy_ += square(n_ - selected_ - step) - square(n_ - selected_);
    selected_ += step;
    x_[k] ^= 1;
    for (const auto& s : slots_of(k)) {
      count_[s.slot] += step;
      const Energy c = cost_with(s.player, s.slot, 0);
      energy_ += c - cost_[s.player];
      cost_[s.player] = c;
    }
  }

  Energy energy() const { return energy_; }
  const Bits& bits() const { return x_; }
  std::size_t size() const { return x_.size(); }

  /// Selectors followed by their cheapest multiplicity bits: a full model
  /// assignment whose energy is penalty * energy of `selectors`.
  Bits expand(std::span<const std::uint8_t> selectors, std::size_t num_vars) const {
    Bits out(num_vars, 0);
    std::copy(selectors.begin(), selectors.end(), out.begin());
    std::vector<int> count(offset_[n_], 0);
    for (std::size_t k = 0; k < selectors.size(); ++k) {
      if (!selectors[k]) continue;
      for (const auto& s : slots_of(k)) ++count[s.slot];
    }
    for (Player p = 0; p < n_; ++p) {
      const auto first = count.begin() + static_cast<std::ptrdiff_t>(offset_[p]);
      const auto top = std::max_element(first, count.begin() + static_cast<std::ptrdiff_t>(offset_[p + 1]));
      if (*top > 0) out[idx_->multiplicity_var(p, static_cast<Action>(top - first), *top)] = 1;
    }
    return out;
  }

 private:
  struct Slot {
    Player player;
    std::size_t slot;
  };

  static Energy square(Energy v) { return v * v; }
  std::span<const Slot> slots_of(std::size_t k) const {
    return {slots_.data() + slot_begin_[k], slots_.data() + slot_begin_[k + 1]};
  }
  std::size_t slot(Player p, Action a) const { return offset_[p] + static_cast<std::size_t>(a); }

  Energy cost_with(Player p, std::size_t changed, int step) const {
    Energy sum = 0;
    Energy top = 0;
    for (std::size_t s = offset_[p]; s < offset_[p + 1]; ++s) {
      const Energy c = count_[s] + (s == changed ? step : 0);
      sum += c * c;
      top = std::max(top, c * c);
    }
    return top == 0 ? 1 : sum - top;
  }

  const VariableIndex* idx_;
  int n_;
  Bits x_;
  std::vector<std::size_t> offset_;
  std::vector<Slot> slots_;
  std::vector<std::size_t> slot_begin_;
  std::vector<int> count_;
  std::vector<Energy> cost_;
  int selected_ = 0;
  Energy energy_ = 0;
};

}  // namespace qnash::detail
