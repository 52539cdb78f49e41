#include <algorithm>
#include <chrono>
#include <cmath>

#include "flip_state.hpp"
#include "qnash/solvers.hpp"

namespace qnash {

SampleSet solve_sa(const QuboModel& model, const SolverParams& params) {
  params.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = model.num_vars();
  const double t_final = params.anneal.final_temperature;
  const double t_initial = std::max(
      params.anneal.initial_temperature.value_or(static_cast<double>(model.max_abs_coefficient())),
      t_final);
  const std::size_t sweeps = params.anneal.sweeps.value_or(std::max<std::size_t>(10 * n, 1));
  // geometric cooling: T_s = T_0 * ratio^s
  const double ratio = sweeps > 1 ? std::pow(t_final / t_initial, 1.0 / static_cast<double>(sweeps - 1)) : 1.0;

  SampleSet out;
  for (int r = 0; r < params.num_repeats; ++r) {
    auto rng = detail::restart_rng(params.seed, static_cast<std::uint64_t>(r));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    detail::FlipState state(model, detail::random_bits(n, rng));
    Bits best = state.bits();
    Energy best_energy = state.energy();

    double temperature = t_initial;
    for (std::size_t s = 0; s < sweeps; ++s, temperature *= ratio) {
      const double beta = 1.0 / temperature;
      for (std::size_t i = 0; i < n; ++i) {
        const Energy d = state.delta(i);
        if (d > 0) {
          const double x = static_cast<double>(d) * beta;
          // exp(-40) is below the resolution of the uniform draw
          if (x > 40.0 || unit(rng) >= std::exp(-x)) continue;
        }
        state.flip(i);
        if (state.energy() < best_energy) {
          best_energy = state.energy();
          best = state.bits();
        }
      }
    }
    out.add(state.bits(), state.energy());
    out.add(std::move(best), best_energy);
  }
  out.normalize();
  out.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace qnash
