#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qnash/game.hpp"
#include "qnash/solvers.hpp"

namespace qnash {

struct ExperimentConfig {
  std::vector<Topology> topologies{Topology::tree, Topology::circle, Topology::road};
  std::vector<int> players{6, 8, 10};
  int actions = 3;
  /// Games per cell (quality, timing) or runs per setting (variance, sweep).
  int trials = 1;
  std::uint64_t seed = 0;
  Backend backend = Backend::sa;
  SolverParams params;
  /// Random-search budget. Unset: the measured Q-Nash total time of the same
  /// instance.
  std::optional<std::chrono::milliseconds> rs_timeout;
  /// Random-search sample budget; with a fixed timeout or none this makes the
  /// rs column reproducible.
  std::optional<std::uint64_t> rs_samples;
  /// Largest prod_p |BR_{M_p}| the brute-force column attempts.
  std::optional<double> bf_max_combinations = 1e15;
  std::vector<int> repeat_values{10, 20, 50, 100};
  /// Worker threads; rows are emitted in configuration order regardless.
  int jobs = 1;

  /// Throws std::invalid_argument on an empty grid or trials < 1.
  void validate() const;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const;
};

/// Seed of game `instance` in the (topology, players) cell.
std::uint64_t game_seed(std::uint64_t base, Topology topology, int players, int instance);

/// Solution quality: PNE found by Q-Nash, brute force and random search for
/// every game of every cell. Columns:
///   topology,players,instance,game_seed,method,pne_found,status
/// status is "ok" or "cap_exceeded" (pne_found empty).
Table quality_grid(const ExperimentConfig& config);

/// Run-to-run spread: one game per cell, solved `trials` times with solver
/// seeds seed, seed+1, ... Columns:
///   topology,players,game_seed,run,solver_seed,pne_found,pne_total
/// pne_total comes from brute force and is empty if that exceeds its cap.
Table variance_runs(const ExperimentConfig& config);

/// Effect of num_repeats on the first topology and player count:
///   num_repeats,run,solver_seed,pne_found
Table repeats_sweep(const ExperimentConfig& config);

/// Median and quartiles of pne_found per num_repeats from a sweep table:
///   num_repeats,median,q1,q3
Table summarize_sweep(const Table& sweep);

/// Phase times per game. Columns:
///   topology,players,instance,game_seed,pointed_sets,variables,
///   best_response_ms,qubo_build_ms,backend_solve_ms,decode_ms,total_ms,bf_ms,bf_status
Table phase_timing(const ExperimentConfig& config);

}  // namespace qnash
