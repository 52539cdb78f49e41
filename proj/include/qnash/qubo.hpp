#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "qnash/best_response.hpp"
#include "qnash/game.hpp"

namespace qnash {

using Energy = std::int64_t;
/// Binary assignment, one byte (0 or 1) per variable.
using Bits = std::vector<std::uint8_t>;

struct QuadraticTerm {
  std::size_t i = 0;
  std::size_t j = 0;
  Energy value = 0;

  bool operator==(const QuadraticTerm&) const = default;
};

struct Coupling {
  std::size_t other = 0;
  Energy value = 0;
};

/// Integer QUBO  E(x) = offset + sum_i Q_ii x_i + sum_{i<j} Q_ij x_i x_j.
///
/// Quadratic terms are kept upper triangular (i < j), merged and sorted; zero
/// entries are dropped. A per-variable adjacency list is built once so that
/// flip deltas cost O(degree).
class QuboModel {
 public:
  QuboModel() = default;
  QuboModel(std::size_t num_vars, Energy offset, std::vector<Energy> linear,
            std::vector<QuadraticTerm> quadratic);

  std::size_t num_vars() const { return linear_.size(); }
  Energy offset() const { return offset_; }
  Energy linear(std::size_t i) const { return linear_[i]; }
  const std::vector<Energy>& linear() const { return linear_; }
  const std::vector<QuadraticTerm>& quadratic() const { return quadratic_; }
  std::span<const Coupling> neighbors(std::size_t i) const {
    return std::span<const Coupling>(adjacency_).subspan(adj_begin_[i], adj_begin_[i + 1] - adj_begin_[i]);
  }
  /// Largest absolute linear or quadratic coefficient (0 for an empty model).
  Energy max_abs_coefficient() const;

  Energy energy(std::span<const std::uint8_t> x) const;
  /// Q_ii + sum_j Q_ij x_j: the energy change of raising x_i from 0 to 1.
  Energy local_field(std::span<const std::uint8_t> x, std::size_t i) const;

  /// Accumulates coefficients in any order; duplicates are summed.
  class Builder {
   public:
    explicit Builder(std::size_t num_vars);
    void add_constant(Energy v) { offset_ += v; }
    void add_linear(std::size_t i, Energy v);
    void add_quadratic(std::size_t i, std::size_t j, Energy v);
    /// Adds weight * (constant + sum a_v x_v)^2 expanded over binary x.
    /// Variables in `terms` must be distinct.
    void add_squared(Energy weight, Energy constant,
                     std::span<const std::pair<std::size_t, Energy>> terms);
    QuboModel build() &&;

   private:
    std::size_t num_vars_;
    Energy offset_ = 0;
    std::vector<Energy> linear_;
    std::vector<QuadraticTerm> pending_;
  };

 private:
  Energy offset_ = 0;
  std::vector<Energy> linear_;
  std::vector<QuadraticTerm> quadratic_;
  std::vector<std::size_t> adj_begin_{0};
  std::vector<Coupling> adjacency_;
};

/// x_{p,j,m}: player p plays action j and exactly m selected sets say so.
struct MultiplicityVar {
  Player player = 0;
  Action action = 0;
  int count = 0;
};

/// Variable layout of a compiled model: selectors x_k for every pointed set
/// come first (index k), then multiplicity variables grouped by player, then
/// action, then ascending count.
class VariableIndex {
 public:
  VariableIndex() = default;
  /// With `truncate` the counts for (p,j) run to coverage(p,j); otherwise to C_B
  /// for every action of every player.
  VariableIndex(const BestResponseCollection& b, const GraphicalGame& game, bool truncate = true);

  std::size_t num_selectors() const { return members_.size(); }
  std::size_t total_vars() const { return num_selectors() + multiplicity_.size(); }
  int num_players() const { return static_cast<int>(coverage_.size()); }
  bool is_selector(std::size_t v) const { return v < num_selectors(); }

  const MultiplicityVar& multiplicity(std::size_t v) const { return multiplicity_.at(v - num_selectors()); }
  /// Number of pointed sets that assign action j to player p (as base or context).
  int coverage(Player p, Action j) const { return static_cast<int>(coverage_[p][j].size()); }
  /// Selectors of the sets counted by coverage(p, j).
  std::span<const std::size_t> covering(Player p, Action j) const { return coverage_[p][j]; }
  /// Largest m with a variable x_{p,j,m}; 0 when there is none.
  int multiplicity_range(Player p, Action j) const { return range_[p][j]; }
  /// Index of x_{p,j,m} for 1 <= m <= multiplicity_range(p, j).
  std::size_t multiplicity_var(Player p, Action j, int m) const;
  std::span<const Assignment> selector_members(std::size_t k) const { return members_.at(k); }
  int num_actions(Player p) const { return static_cast<int>(coverage_[p].size()); }

 private:
  std::vector<std::vector<Assignment>> members_;
  std::vector<MultiplicityVar> multiplicity_;
  std::vector<std::vector<std::vector<std::size_t>>> coverage_;
  std::vector<std::vector<int>> range_;
  std::vector<std::vector<std::size_t>> first_;
};

/// The penalty Hamiltonian of a game together with its variable layout.
struct CompiledQubo {
  QuboModel model;
  VariableIndex index;
  Energy penalty = 1;
  int num_players = 0;
};

struct BuildOptions {
  Energy penalty = 1;
  /// Bound x_{p,j,m} by the coverage of (p,j) instead of by C_B.
  bool truncate_multiplicity = true;
};

/// Compiles B into
///   H = A sum_p (1 - sum_{j,m} x_{p,j,m})^2
///     + A sum_{p,j} (sum_m m x_{p,j,m} - sum_{k covers (p,j)} x_k)^2
///     + A (n - sum_k x_k)^2.
/// H(x) = 0 exactly when x selects one pointed set per player whose union is a
/// consistent global profile.
CompiledQubo build_qubo(const BestResponseCollection& b, const GraphicalGame& game,
                        const BuildOptions& options = {});

Energy energy(const QuboModel& model, std::span<const std::uint8_t> x);

/// Global profile encoded by a zero-energy assignment, nullopt otherwise.
/// Throws std::logic_error if a zero-energy assignment fails to describe a
/// pure Nash equilibrium.
std::optional<GlobalProfile> decode(const CompiledQubo& compiled, std::span<const std::uint8_t> x,
                                    const BestResponseCollection& b, const GraphicalGame& game);

/// Spin form  E(s) = offset + sum_i h_i s_i + sum_{i<j} J_ij s_i s_j  with s in {-1,+1}.
/// Coefficients are multiples of 1/4 and represented exactly.
struct IsingModel {
  std::vector<double> h;
  std::vector<std::tuple<std::size_t, std::size_t, double>> j;
  double offset = 0.0;

  double energy(std::span<const std::int8_t> spins) const;
};

/// Substitutes x = (s + 1) / 2.
IsingModel to_ising(const QuboModel& model);

enum class QuboFormat { coo, qbsolv };

QuboFormat parse_qubo_format(std::string_view name);
void write_qubo(std::ostream& out, const QuboModel& model, QuboFormat format);
void export_qubo(const QuboModel& model, QuboFormat format, const std::filesystem::path& path);
/// Reads either format (detected from the first non-comment line).
QuboModel read_qubo(std::istream& in);
QuboModel import_qubo(const std::filesystem::path& path);

}  // namespace qnash
