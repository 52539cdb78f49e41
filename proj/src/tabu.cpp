#include <chrono>
#include <limits>

#include "flip_state.hpp"
#include "qnash/solvers.hpp"

namespace qnash {

namespace detail {

Sample tabu_walk(const QuboModel& model, Bits start, std::size_t tenure, std::size_t stall_limit,
                 std::mt19937_64& rng) {
  const std::size_t n = model.num_vars();
  FlipState state(model, std::move(start));
  Sample best{state.bits(), state.energy()};
  if (n == 0) return best;
  tenure = std::min(tenure, n - 1);
  std::vector<std::size_t> tabu_until(n, 0);
  std::size_t stall = 0;
  for (std::size_t iter = 1; stall < stall_limit; ++iter) {
    std::size_t move = n;
    Energy move_delta = std::numeric_limits<Energy>::max();
    std::size_t ties = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const Energy d = state.delta(i);
      const bool allowed = tabu_until[i] < iter || state.energy() + d < best.energy;
      if (!allowed || d > move_delta) continue;
      if (d < move_delta) {
        move = i;
        move_delta = d;
        ties = 1;
      } else if (rng() % ++ties == 0) {
        move = i;
      }
    }
    if (move == n) break;
    state.flip(move);
    tabu_until[move] = iter + tenure;
    if (state.energy() < best.energy) {
      best = {state.bits(), state.energy()};
      stall = 0;
    } else {
      ++stall;
    }
  }
  return best;
}

}  // namespace detail

SampleSet solve_tabu(const QuboModel& model, const SolverParams& params) {
  params.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = model.num_vars();
  const std::size_t tenure = params.tabu_tenure.value_or(std::max<std::size_t>(10, n / 10));
  const std::size_t stall_limit = params.tabu_stall_limit.value_or(std::max<std::size_t>(50 * n, 1));

  SampleSet out;
  for (int r = 0; r < params.num_repeats; ++r) {
    auto rng = detail::restart_rng(params.seed, static_cast<std::uint64_t>(r));
    auto x = detail::random_bits(n, rng);
    auto best = detail::tabu_walk(model, std::move(x), tenure, stall_limit, rng);
    out.add(std::move(best.x), best.energy);
  }
  out.normalize();
  out.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace qnash
