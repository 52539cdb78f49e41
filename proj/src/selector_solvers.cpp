#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include "flip_state.hpp"
#include "qnash/baselines.hpp"
#include "qnash/solvers.hpp"
#include "selector_state.hpp"

namespace qnash {

namespace {

using detail::SelectorState;

double elapsed_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

/// Every distinct selector vector seen at the lowest energy so far.
class LowestStates {
 public:
  explicit LowestStates(const SelectorState& state) : energy_(state.energy()) { states_.insert(state.bits()); }

  void offer(const SelectorState& state) {
    if (state.energy() < energy_) {
      energy_ = state.energy();
      states_.clear();
    }
    if (state.energy() == energy_) states_.insert(state.bits());
  }

  Energy energy() const { return energy_; }
  const std::set<Bits>& states() const { return states_; }

 private:
  Energy energy_;
  std::set<Bits> states_;
};

void move_to(SelectorState& state, const Bits& target) {
  for (std::size_t k = 0; k < target.size(); ++k) {
    if (state.bits()[k] != target[k]) state.flip(k);
  }
}

void emit(const CompiledQubo& compiled, const SelectorState& state, const Bits& selectors, Energy reduced,
          SampleSet& out) {
  Bits x = state.expand(selectors, compiled.model.num_vars());
  const Energy e = compiled.model.energy(x);
  if (e != compiled.penalty * reduced) throw std::logic_error("selector energy disagrees with the model");
  out.add(std::move(x), e);
}

struct Schedule {
  double t_initial;
  double t_final;
  std::size_t sweeps;
};

Schedule schedule_for(const AnnealSchedule& anneal, std::size_t num_vars) {
  const double t_final = anneal.final_temperature;
  const double t_initial = std::max(anneal.initial_temperature.value_or(2.0), t_final);
  return {t_initial, t_final, anneal.sweeps.value_or(std::max<std::size_t>(25 * num_vars, 1))};
}

/// Metropolis sweeps over `vars` with geometric cooling.
void anneal(SelectorState& state, std::span<const std::size_t> vars, const Schedule& schedule,
            std::mt19937_64& rng, LowestStates& lowest) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double ratio = schedule.sweeps > 1 ? std::pow(schedule.t_final / schedule.t_initial,
                                                      1.0 / static_cast<double>(schedule.sweeps - 1))
                                           : 1.0;
  // acceptance probability of an uphill step of d penalty units, for the
  // current temperature; steps beyond the table are never accepted
  std::vector<double> accept;
  double temperature = schedule.t_initial;
  for (std::size_t s = 0; s < schedule.sweeps; ++s, temperature *= ratio) {
    accept.clear();
    for (Energy d = 1; static_cast<double>(d) / temperature <= 40.0; ++d) {
      accept.push_back(std::exp(-static_cast<double>(d) / temperature));
    }
    for (std::size_t k : vars) {
      const Energy d = state.delta(k);
      if (d > 0 && (d > static_cast<Energy>(accept.size()) || unit(rng) >= accept[d - 1])) continue;
      state.flip(k);
      lowest.offer(state);
    }
  }
}

/// Steepest-descent tabu walk over `vars`, leaving the state at the best
/// assignment it saw.
void tabu_walk(SelectorState& state, std::span<const std::size_t> vars, std::size_t tenure,
               std::size_t stall_limit, std::mt19937_64& rng, LowestStates& lowest) {
  if (vars.empty()) return;
  tenure = std::min(tenure, vars.size() - 1);
  std::vector<std::size_t> tabu_until(vars.size(), 0);
  Bits best = state.bits();
  Energy best_energy = state.energy();
  std::size_t stall = 0;
  for (std::size_t iter = 1; stall < stall_limit; ++iter) {
    std::size_t move = vars.size();
    Energy move_delta = std::numeric_limits<Energy>::max();
    std::size_t ties = 0;
    for (std::size_t l = 0; l < vars.size(); ++l) {
      const Energy d = state.delta(vars[l]);
      const bool allowed = tabu_until[l] < iter || state.energy() + d < best_energy;
      if (!allowed || d > move_delta) continue;
      if (d < move_delta) {
        move = l;
        move_delta = d;
        ties = 1;
      } else if (rng() % ++ties == 0) {
        move = l;
      }
    }
    if (move == vars.size()) break;
    state.flip(vars[move]);
    tabu_until[move] = iter + tenure;
    lowest.offer(state);
    if (state.energy() < best_energy) {
      best = state.bits();
      best_energy = state.energy();
      stall = 0;
    } else {
      ++stall;
    }
  }
  move_to(state, best);
}

/// Gray-code enumeration of `vars`; leaves the state at a minimum drawn
/// uniformly among ties.
void enumerate_block(SelectorState& state, std::span<const std::size_t> vars, std::mt19937_64& rng,
                     LowestStates& lowest) {
  std::uint64_t mask = 0;
  std::uint64_t chosen = 0;
  Energy best = state.energy();
  std::uint64_t ties = 1;
  const std::uint64_t total = std::uint64_t{1} << vars.size();
  for (std::uint64_t step = 1; step < total; ++step) {
    const auto i = static_cast<std::size_t>(std::countr_zero(step));
    state.flip(vars[i]);
    mask ^= std::uint64_t{1} << i;
    lowest.offer(state);
    if (state.energy() < best) {
      best = state.energy();
      chosen = mask;
      ties = 1;
    } else if (state.energy() == best && rng() % ++ties == 0) {
      chosen = mask;
    }
  }
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (((mask ^ chosen) >> i) & 1U) state.flip(vars[i]);
  }
}

std::size_t tenure_for(const SolverParams& params, std::size_t n) {
  return params.tabu_tenure.value_or(std::max<std::size_t>(10, n / 10));
}

std::size_t stall_for(const SolverParams& params, std::size_t n) {
  return params.tabu_stall_limit.value_or(std::max<std::size_t>(50 * n, 1));
}

std::vector<std::size_t> all_vars(std::size_t n) {
  std::vector<std::size_t> vars(n);
  std::iota(vars.begin(), vars.end(), 0);
  return vars;
}

}  // namespace

SampleSet solve_sa(const CompiledQubo& compiled, const SolverParams& params) {
  params.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = compiled.index.num_selectors();
  const auto schedule = schedule_for(params.anneal, n);
  const auto vars = all_vars(n);

  SampleSet out;
  for (int r = 0; r < params.num_repeats; ++r) {
    auto rng = detail::restart_rng(params.seed, static_cast<std::uint64_t>(r));
    SelectorState state(compiled, detail::random_bits(n, rng));
    LowestStates lowest(state);
    anneal(state, vars, schedule, rng, lowest);
    emit(compiled, state, state.bits(), state.energy(), out);
    for (const auto& s : lowest.states()) emit(compiled, state, s, lowest.energy(), out);
  }
  out.normalize();
  out.elapsed_ms = elapsed_since(start);
  return out;
}

SampleSet solve_tabu(const CompiledQubo& compiled, const SolverParams& params) {
  params.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = compiled.index.num_selectors();
  const auto vars = all_vars(n);

  SampleSet out;
  for (int r = 0; r < params.num_repeats; ++r) {
    auto rng = detail::restart_rng(params.seed, static_cast<std::uint64_t>(r));
    SelectorState state(compiled, detail::random_bits(n, rng));
    LowestStates lowest(state);
    tabu_walk(state, vars, tenure_for(params, n), stall_for(params, n), rng, lowest);
    for (const auto& s : lowest.states()) emit(compiled, state, s, lowest.energy(), out);
  }
  out.normalize();
  out.elapsed_ms = elapsed_since(start);
  return out;
}

SampleSet solve_decomposed(const CompiledQubo& compiled, const SolverParams& params, Backend inner) {
  params.validate();
  if (inner == Backend::decomp) throw std::invalid_argument("decomposition cannot nest itself");
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = compiled.index.num_selectors();
  const std::size_t block_size = std::min(params.subproblem_size, n);
  if (inner == Backend::exhaustive && block_size > std::min<std::size_t>(params.exhaustive_cap, 62)) {
    throw CapExceeded("decomposition: subproblem size " + std::to_string(block_size) +
                      " exceeds the exhaustive cap of " + std::to_string(params.exhaustive_cap));
  }
  const auto everything = all_vars(n);
  const std::size_t tenure = tenure_for(params, n);
  const std::size_t stall_limit = stall_for(params, n);
  const auto block_schedule = schedule_for(params.anneal, block_size);

  SampleSet out;
  std::vector<std::size_t> order(n);
  std::vector<Energy> impact(n);
  std::vector<std::size_t> block(block_size);
  for (int r = 0; r < params.num_repeats; ++r) {
    auto rng = detail::restart_rng(params.seed, static_cast<std::uint64_t>(r));
    SelectorState state(compiled, detail::random_bits(n, rng));
    LowestStates lowest(state);
    if (params.decomposition_tabu_polish) tabu_walk(state, everything, tenure, stall_limit, rng, lowest);
    auto& trace = out.traces.emplace_back();
    trace.push_back(state.energy());
    Energy best = state.energy();

    for (std::size_t stall = 0; stall < params.decomposition_stall_passes;) {
      for (std::size_t k = 0; k < n; ++k) {
        const Energy d = state.delta(k);
        impact[k] = d < 0 ? -d : d;
      }
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return impact[a] > impact[b]; });

      for (std::size_t first = 0; first < n; first += block_size) {
        const std::size_t begin = std::min(first, n - block_size);
        std::copy_n(order.begin() + static_cast<std::ptrdiff_t>(begin), block_size, block.begin());
        const Bits before = state.bits();
        const Energy before_energy = state.energy();
        switch (inner) {
          case Backend::exhaustive: enumerate_block(state, block, rng, lowest); break;
          case Backend::sa: {
            LowestStates block_best(state);
            anneal(state, block, block_schedule, rng, block_best);
            move_to(state, *block_best.states().begin());
            lowest.offer(state);
            break;
          }
          case Backend::tabu:
            tabu_walk(state, block, tenure_for(params, block_size), stall_for(params, block_size), rng, lowest);
            break;
          case Backend::decomp: break;
        }
        if (state.energy() > before_energy) move_to(state, before);
        trace.push_back(state.energy());
      }
      if (params.decomposition_tabu_polish) {
        tabu_walk(state, everything, tenure, stall_limit, rng, lowest);
        trace.push_back(state.energy());
      }

      if (state.energy() < best) {
        best = state.energy();
        stall = 0;
      } else {
        ++stall;
      }
    }
    emit(compiled, state, state.bits(), state.energy(), out);
    for (const auto& s : lowest.states()) emit(compiled, state, s, lowest.energy(), out);
  }
  out.normalize();
  out.elapsed_ms = elapsed_since(start);
  return out;
}

}  // namespace qnash
