#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qnash/best_response.hpp"
#include "qnash/game.hpp"

namespace qnash {

/// Raised when an exhaustive method would exceed its configured work cap.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BaselineReport {
  std::string method;
  /// Distinct equilibria in lexicographic order.
  std::vector<GlobalProfile> pne_found;
  double elapsed_ms = 0.0;
  /// Profiles (oracle) or full set combinations (bf, rs) actually checked.
  std::uint64_t combinations_examined = 0;
  /// Partial combinations abandoned by brute-force pruning.
  std::uint64_t prefixes_pruned = 0;
  /// prod_p |BR_{M_p}|, the size of the unpruned search space.
  double combinations_total = 0.0;
};

/// No player can gain by deviating unilaterally from `profile`.
bool is_pne(const GraphicalGame& game, std::span<const Action> profile);

/// All PNE by checking every global profile. Throws CapExceeded when the
/// profile space is larger than `max_profiles`.
BaselineReport oracle_pne(const GraphicalGame& game, std::uint64_t max_profiles = 59049);

struct BruteForceOptions {
  /// Abandon a partial combination as soon as two sets disagree.
  bool prune = true;
  /// Upper bound on prod_p |BR_{M_p}|; nullopt disables the check.
  std::optional<double> max_combinations = 1e15;
};

/// Tries combinations of one pointed set per player and keeps those whose
/// union is a consistent global profile.
BaselineReport brute_force_sets(const GraphicalGame& game, const BruteForceOptions& options = {});
BaselineReport brute_force_sets(const GraphicalGame& game, const BestResponseCollection& b,
                                const BruteForceOptions& options = {});

struct RandomSearchOptions {
  std::chrono::nanoseconds timeout{0};
  std::uint64_t seed = 0;
  /// Optional sample budget, checked in addition to the timeout.
  std::optional<std::uint64_t> max_samples;
};

/// Samples one pointed set per player uniformly at random until the timeout.
BaselineReport random_search(const GraphicalGame& game, const RandomSearchOptions& options);

}  // namespace qnash
