#include <algorithm>
#include <chrono>
#include <numeric>
#include <stdexcept>

#include "flip_state.hpp"
#include "qnash/baselines.hpp"
#include "qnash/solvers.hpp"

namespace qnash {

namespace {

/// The model restricted to `block` with every other variable clamped to its
/// value in `x`. The sub-model's energy equals the full energy.
QuboModel clamp_to_block(const QuboModel& model, const detail::FlipState& state,
                         std::span<const std::size_t> block, std::vector<int>& slot) {
  const auto& x = state.bits();
  for (std::size_t l = 0; l < block.size(); ++l) slot[block[l]] = static_cast<int>(l);

  std::vector<Energy> linear(block.size(), 0);
  std::vector<QuadraticTerm> quad;
  Energy inside = 0;  // energy contribution of the block at its current values
  for (std::size_t l = 0; l < block.size(); ++l) {
    const std::size_t v = block[l];
    Energy lin = model.linear(v);
    for (const auto& c : model.neighbors(v)) {
      const int other = slot[c.other];
      if (other < 0) {
        if (x[c.other]) lin += c.value;
      } else if (static_cast<std::size_t>(other) > l) {
        quad.push_back({l, static_cast<std::size_t>(other), c.value});
        if (x[v] && x[c.other]) inside += c.value;
      }
    }
    linear[l] = lin;
    if (x[v]) inside += lin;
  }
  for (std::size_t v : block) slot[v] = -1;
  return QuboModel(block.size(), state.energy() - inside, std::move(linear), std::move(quad));
}

Sample solve_block(const QuboModel& sub, Backend inner, const SolverParams& params,
                   std::mt19937_64& rng) {
  SolverParams p = params;
  p.num_repeats = 1;
  p.seed = rng();
  SampleSet result;
  switch (inner) {
    case Backend::exhaustive: result = solve_exhaustive(sub, params.exhaustive_cap); break;
    case Backend::sa: result = solve_sa(sub, p); break;
    case Backend::tabu: result = solve_tabu(sub, p); break;
    case Backend::decomp: throw std::invalid_argument("decomposition cannot nest itself");
  }
  return result.samples.front();
}

}  // namespace

SampleSet solve_decomposed(const QuboModel& model, const SolverParams& params, Backend inner) {
  params.validate();
  if (inner == Backend::decomp) throw std::invalid_argument("decomposition cannot nest itself");
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = model.num_vars();
  const std::size_t block_size = std::min(params.subproblem_size, n);
  if (inner == Backend::exhaustive && block_size > params.exhaustive_cap) {
    throw CapExceeded("decomposition: subproblem size " + std::to_string(block_size) +
                      " exceeds the exhaustive cap of " + std::to_string(params.exhaustive_cap));
  }

  SampleSet out;
  if (block_size == n) {
    SolverParams whole = params;
    switch (inner) {
      case Backend::exhaustive: out = solve_exhaustive(model, params.exhaustive_cap); break;
      case Backend::sa: out = solve_sa(model, whole); break;
      default: out = solve_tabu(model, whole); break;
    }
    if (auto e = out.best_energy()) out.traces.push_back({*e});
    out.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return out;
  }

  const std::size_t tenure = params.tabu_tenure.value_or(std::max<std::size_t>(10, n / 10));
  const std::size_t stall_limit = params.tabu_stall_limit.value_or(std::max<std::size_t>(50 * n, 1));
  std::vector<int> slot(n, -1);
  std::vector<std::size_t> order(n);
  std::vector<std::size_t> block(block_size);

  for (int r = 0; r < params.num_repeats; ++r) {
    auto rng = detail::restart_rng(params.seed, static_cast<std::uint64_t>(r));
    Bits x0 = detail::random_bits(n, rng);
    if (params.decomposition_tabu_polish) x0 = detail::tabu_walk(model, std::move(x0), tenure, stall_limit, rng).x;
    detail::FlipState state(model, std::move(x0));
    Sample best{state.bits(), state.energy()};
    auto& trace = out.traces.emplace_back();
    trace.push_back(state.energy());

    for (std::size_t stall = 0; stall < params.decomposition_stall_passes;) {
      std::vector<Energy> impact(n);
      for (std::size_t i = 0; i < n; ++i) {
        const Energy d = state.delta(i);
        impact[i] = d < 0 ? -d : d;
      }
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return impact[a] > impact[b]; });

      for (std::size_t first = 0; first < n; first += block_size) {
        // the last block is shifted back so every block has block_size variables
        const std::size_t begin = std::min(first, n - block_size);
        std::copy_n(order.begin() + static_cast<std::ptrdiff_t>(begin), block_size, block.begin());
        const auto sub = clamp_to_block(model, state, block, slot);
        const Sample candidate = solve_block(sub, inner, params, rng);
        if (candidate.energy > state.energy()) continue;
        for (std::size_t l = 0; l < block_size; ++l) {
          if (candidate.x[l] != state.bits()[block[l]]) state.flip(block[l]);
        }
        trace.push_back(state.energy());
      }

      if (params.decomposition_tabu_polish) {
        auto polished = detail::tabu_walk(model, state.bits(), tenure, stall_limit, rng);
        if (polished.energy <= state.energy()) {
          for (std::size_t i = 0; i < n; ++i) {
            if (polished.x[i] != state.bits()[i]) state.flip(i);
          }
          trace.push_back(state.energy());
        }
      }

      if (state.energy() < best.energy) {
        best = {state.bits(), state.energy()};
        stall = 0;
      } else {
        ++stall;
      }
    }
    out.add(std::move(best.x), best.energy);
  }
  out.normalize();
  out.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace qnash
