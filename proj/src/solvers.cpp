#include "qnash/solvers.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <set>
#include <stdexcept>

#include "flip_state.hpp"
#include "qnash/baselines.hpp"

namespace qnash {

namespace {

using Clock = std::chrono::steady_clock;

double ms_between(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double, std::milli>(b - a).count();
}

}  // namespace

void SolverParams::validate() const {
  if (num_repeats < 1) throw std::invalid_argument("num_repeats must be >= 1");
  if (subproblem_size < 2) throw std::invalid_argument("subproblem_size must be >= 2");
  if (!(anneal.final_temperature > 0.0)) throw std::invalid_argument("final temperature must be positive");
  if (anneal.initial_temperature && !(*anneal.initial_temperature > anneal.final_temperature)) {
    throw std::invalid_argument("initial temperature must exceed the final temperature");
  }
  if (anneal.sweeps && *anneal.sweeps == 0) throw std::invalid_argument("sweeps must be >= 1");
  if (tabu_stall_limit && *tabu_stall_limit == 0) throw std::invalid_argument("stall limit must be >= 1");
  if (decomposition_stall_passes == 0) throw std::invalid_argument("decomposition stall passes must be >= 1");
  if (decomposition_inner == Backend::decomp) throw std::invalid_argument("decomposition cannot nest itself");
}

void SampleSet::normalize() {
  std::sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) {
    return a.energy != b.energy ? a.energy < b.energy : a.x < b.x;
  });
  samples.erase(std::unique(samples.begin(), samples.end()), samples.end());
}

std::optional<Energy> SampleSet::best_energy() const {
  if (samples.empty()) return std::nullopt;
  return samples.front().energy;
}

Backend parse_backend(std::string_view name) {
  if (name == "exhaustive") return Backend::exhaustive;
  if (name == "sa") return Backend::sa;
  if (name == "tabu") return Backend::tabu;
  if (name == "decomp") return Backend::decomp;
  throw std::invalid_argument("unknown backend '" + std::string(name) + "'");
}

std::string_view to_string(Backend backend) {
  switch (backend) {
    case Backend::exhaustive: return "exhaustive";
    case Backend::sa: return "sa";
    case Backend::tabu: return "tabu";
    case Backend::decomp: return "decomp";
  }
  return "?";
}

SampleSet solve_exhaustive(const QuboModel& model, std::size_t cap) {
  const auto start = Clock::now();
  const std::size_t n = model.num_vars();
  if (n > cap || n > 62) {
    throw CapExceeded("exhaustive: " + std::to_string(n) + " variables exceed the cap of " +
                      std::to_string(std::min<std::size_t>(cap, 62)));
  }
  // Gray-code walk: one flip per step
  detail::FlipState state(model, Bits(n, 0));
  Energy best = state.energy();
  std::uint64_t mask = 0;
  std::vector<std::uint64_t> minima{0};
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    const auto i = static_cast<std::size_t>(std::countr_zero(step));
    state.flip(i);
    mask ^= std::uint64_t{1} << i;
    if (state.energy() < best) {
      best = state.energy();
      minima.clear();
    }
    if (state.energy() == best) minima.push_back(mask);
  }
  SampleSet out;
  out.samples.reserve(minima.size());
  for (std::uint64_t m : minima) {
    Bits x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<std::uint8_t>((m >> i) & 1U);
    out.add(std::move(x), best);
  }
  out.normalize();
  out.elapsed_ms = ms_between(start, Clock::now());
  return out;
}

SampleSet run_backend(const CompiledQubo& compiled, Backend backend, const SolverParams& params) {
  switch (backend) {
    case Backend::exhaustive:
      if (compiled.model.num_vars() <= params.exhaustive_cap) {
        return solve_exhaustive(compiled.model, params.exhaustive_cap);
      }
      return enumerate_zero_energy(compiled);
    case Backend::sa:
      return params.selector_moves ? solve_sa(compiled, params) : solve_sa(compiled.model, params);
    case Backend::tabu:
      return params.selector_moves ? solve_tabu(compiled, params) : solve_tabu(compiled.model, params);
    case Backend::decomp:
      return params.selector_moves ? solve_decomposed(compiled, params, params.decomposition_inner)
                                   : solve_decomposed(compiled.model, params, params.decomposition_inner);
  }
  throw std::invalid_argument("unknown backend");
}

SolveReport find_all_pne(const GraphicalGame& game, Backend backend, const SolverParams& params,
                         const BuildOptions& build) {
  params.validate();
  SolveReport report;
  report.backend = backend;
  report.params = params;
  report.penalty = build.penalty;

  const auto t0 = Clock::now();
  const auto b = collect_b(game);
  const auto t1 = Clock::now();
  const auto compiled = build_qubo(b, game, build);
  const auto t2 = Clock::now();
  const auto samples = run_backend(compiled, backend, params);
  const auto t3 = Clock::now();

  std::set<GlobalProfile> found;
  for (const auto& s : samples.samples) {
    if (s.energy != 0) continue;
    if (auto profile = decode(compiled, s.x, b, game)) found.insert(std::move(*profile));
  }
  for (const auto& profile : found) {
    if (!is_pne(game, profile)) throw std::logic_error("pipeline produced a non-equilibrium");
  }
  const auto t4 = Clock::now();

  report.pne_found.assign(found.begin(), found.end());
  report.c_b = b.c_b();
  report.num_vars = compiled.model.num_vars();
  report.num_samples = samples.samples.size();
  report.best_energy = samples.best_energy();
  report.timings = {ms_between(t0, t1), ms_between(t1, t2), ms_between(t2, t3), ms_between(t3, t4),
                    ms_between(t0, t4)};
  return report;
}

}  // namespace qnash
