#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qnash/qubo.hpp"
#include "qnash/solvers.hpp"

namespace qnash::detail {

/// Assignment plus cached local fields, so a flip delta is O(1) and a flip
/// is O(degree).
class FlipState {
 public:
  FlipState(const QuboModel& model, Bits x) : model_(&model), x_(std::move(x)) {
    field_.resize(model.num_vars());
    for (std::size_t i = 0; i < x_.size(); ++i) field_[i] = model.local_field(x_, i);
    energy_ = model.energy(x_);
  }

  Energy delta(std::size_t i) const { return x_[i] ? -field_[i] : field_[i]; }

  void flip(std::size_t i) {
    energy_ += delta(i);
    x_[i] ^= 1;
    const bool on = x_[i];
    for (const auto& c : model_->neighbors(i)) field_[c.other] += on ? c.value : -c.value;
  }

  Energy energy() const { return energy_; }
  const Bits& bits() const { return x_; }
  std::size_t size() const { return x_.size(); }

 private:
  const QuboModel* model_;
  Bits x_;
  std::vector<Energy> field_;
  Energy energy_ = 0;
};

/// Independent stream for restart `stream` of a run seeded with `seed`.
inline std::mt19937_64 restart_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

inline Bits random_bits(std::size_t n, std::mt19937_64& rng) {
  Bits x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<std::uint8_t>(rng() >> 63);
  return x;
}

/// One tabu walk from `start`; returns the best assignment seen.
Sample tabu_walk(const QuboModel& model, Bits start, std::size_t tenure, std::size_t stall_limit,
                 std::mt19937_64& rng);

}  // namespace qnash::detail
