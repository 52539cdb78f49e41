#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qnash/game.hpp"
#include "qnash/qubo.hpp"

namespace qnash {

enum class Backend { exhaustive, sa, tabu, decomp };

Backend parse_backend(std::string_view name);
std::string_view to_string(Backend backend);

struct AnnealSchedule {
  /// Defaults to the largest absolute coefficient of the model for raw
  /// models and to 2 penalty units in selector space.
  std::optional<double> initial_temperature;
  double final_temperature = 0.1;
  /// Defaults to 10 sweeps per variable for raw models and 25 per selector in
  /// selector space.
  std::optional<std::size_t> sweeps;
};

struct SolverParams {
  /// Independent restarts. Restart r draws from its own stream seeded by
  /// (seed, r), so the first r restarts do not depend on num_repeats.
  int num_repeats = 1;
  std::size_t subproblem_size = 20;
  std::uint64_t seed = 0;
  AnnealSchedule anneal;
  /// Defaults to max(10, num_vars / 10).
  std::optional<std::size_t> tabu_tenure;
  /// Non-improving flips before a tabu start gives up. Defaults to 50 * num_vars.
  std::optional<std::size_t> tabu_stall_limit;
  /// Largest model solve_exhaustive will enumerate.
  std::size_t exhaustive_cap = 24;
  /// Decomposition passes without improvement before a restart ends.
  std::size_t decomposition_stall_passes = 3;
  /// Run a full tabu search after every decomposition pass.
  bool decomposition_tabu_polish = true;
  /// Solver applied to each decomposition block.
  Backend decomposition_inner = Backend::exhaustive;
  /// Pipeline heuristics search selector space (see solve_sa on a compiled
  /// model). When false they flip single bits of the full model instead.
  bool selector_moves = true;

  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
};

struct Sample {
  Bits x;
  Energy energy = 0;

  bool operator==(const Sample&) const = default;
};

struct SampleSet {
  /// Distinct assignments ordered by (energy, x).
  std::vector<Sample> samples;
  double elapsed_ms = 0.0;
  /// Per decomposition restart: energy of the current assignment after
  /// every accepted step.
  std::vector<std::vector<Energy>> traces;

  void add(Bits x, Energy e) { samples.push_back({std::move(x), e}); }
  /// Sorts by (energy, x) and removes duplicates.
  void normalize();
  std::optional<Energy> best_energy() const;
};

/// Every minimum-energy assignment of a model with at most `cap` variables.
/// Throws CapExceeded above the cap.
SampleSet solve_exhaustive(const QuboModel& model, std::size_t cap = 24);

/// Single-flip Metropolis annealing with geometric cooling. Each restart
/// contributes its final state and the best state it visited.
SampleSet solve_sa(const QuboModel& model, const SolverParams& params);

/// Selector-space annealing on a compiled model. Only selector bits move;
/// every multiplicity bit is held at its conditional minimum, so each step
/// adds or drops a whole pointed set. Energies are measured in penalty units
/// and returned vectors are full model assignments. Each restart contributes
/// its final state and every distinct state it saw at its lowest energy.
SampleSet solve_sa(const CompiledQubo& compiled, const SolverParams& params);

/// Multistart tabu search: steepest single flips with a tabu tenure and
/// aspiration, stopping after tabu_stall_limit non-improving moves.
SampleSet solve_tabu(const QuboModel& model, const SolverParams& params);

/// Selector-space tabu search; tenure and stall limit scale with the
/// selector count.
SampleSet solve_tabu(const CompiledQubo& compiled, const SolverParams& params);

/// Block-coordinate driver in the spirit of QBSolv: rank variables by flip
/// impact, clamp everything outside a block of subproblem_size variables,
/// solve the induced sub-QUBO with `inner` and keep the result unless the
/// energy rises.
SampleSet solve_decomposed(const QuboModel& model, const SolverParams& params, Backend inner);

/// Selector-space decomposition: blocks of subproblem_size selectors ranked
/// by flip impact, each solved by `inner` with the other selectors fixed.
SampleSet solve_decomposed(const CompiledQubo& compiled, const SolverParams& params, Backend inner);

/// Every zero-energy assignment of a compiled penalty model, found by
/// branch and bound over the selector bits. Exact for any model size.
SampleSet enumerate_zero_energy(const CompiledQubo& compiled);

/// Runs `backend` on the compiled model. `exhaustive` enumerates all
/// assignments within the cap and falls back to enumerate_zero_energy above it.
/// The heuristics run in selector space unless params.selector_moves is off.
SampleSet run_backend(const CompiledQubo& compiled, Backend backend, const SolverParams& params);

struct PhaseTimings {
  double best_response_ms = 0.0;
  double qubo_build_ms = 0.0;
  double solve_ms = 0.0;
  double decode_ms = 0.0;
  double total_ms = 0.0;
};

struct SolveReport {
  /// Distinct equilibria in lexicographic order.
  std::vector<GlobalProfile> pne_found;
  PhaseTimings timings;
  Backend backend = Backend::exhaustive;
  SolverParams params;
  Energy penalty = 1;
  std::size_t c_b = 0;
  std::size_t num_vars = 0;
  std::size_t num_samples = 0;
  std::optional<Energy> best_energy;
};

/// Best responses, QUBO compilation, backend, then decoding of every
/// zero-energy sample.
SolveReport find_all_pne(const GraphicalGame& game, Backend backend, const SolverParams& params,
                         const BuildOptions& build = {});

}  // namespace qnash
