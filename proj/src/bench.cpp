#include "qnash/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <functional>
#include <map>
#include <stdexcept>
#include <thread>

#include "qnash/baselines.hpp"
#include "qnash/best_response.hpp"

namespace qnash {

namespace {

using Row = std::vector<std::string>;
using Cell = std::function<std::vector<Row>()>;

std::string number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string number(std::uint64_t v) { return std::to_string(v); }

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Runs every cell on up to `jobs` threads and concatenates their rows in
/// cell order.
std::vector<Row> run_cells(const std::vector<Cell>& cells, int jobs) {
  std::vector<std::vector<Row>> results(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < cells.size();) {
      try {
        results[i] = cells[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto threads = static_cast<std::size_t>(std::max(1, jobs));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < std::min(threads, cells.size()); ++t) pool.emplace_back(worker);
  }
  std::vector<Row> rows;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    for (auto& r : results[i]) rows.push_back(std::move(r));
  }
  return rows;
}

RandomSearchOptions rs_options(const ExperimentConfig& config, double qnash_ms, std::uint64_t seed) {
  RandomSearchOptions rs;
  rs.seed = seed;
  rs.max_samples = config.rs_samples;
  if (config.rs_timeout) {
    rs.timeout = *config.rs_timeout;
  } else if (config.rs_samples) {
    rs.timeout = std::chrono::nanoseconds::max();
  } else {
    rs.timeout = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::duration<double, std::milli>(qnash_ms));
  }
  return rs;
}

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (topologies.empty() || players.empty()) throw std::invalid_argument("experiment grid is empty");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
  if (repeat_values.empty()) throw std::invalid_argument("num_repeats sweep is empty");
  for (int r : repeat_values) {
    if (r < 1) throw std::invalid_argument("num_repeats values must be >= 1");
  }
  params.validate();
}

std::string Table::to_csv() const {
  std::string out;
  const auto line = [&](const Row& r) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += ',';
      out += r[i];
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

std::uint64_t game_seed(std::uint64_t base, Topology topology, int players, int instance) {
  std::uint64_t h = splitmix64(base);
  h = splitmix64(h ^ static_cast<std::uint64_t>(topology));
  h = splitmix64(h ^ static_cast<std::uint64_t>(players));
  return splitmix64(h ^ static_cast<std::uint64_t>(instance));
}

Table quality_grid(const ExperimentConfig& config) {
  config.validate();
  const std::string qnash_name = "qnash-" + std::string(to_string(config.backend));
  std::vector<Cell> cells;
  for (Topology topo : config.topologies) {
    for (int n : config.players) {
      for (int i = 0; i < config.trials; ++i) {
        cells.push_back([&config, &qnash_name, topo, n, i] {
          const std::uint64_t gs = game_seed(config.seed, topo, n, i);
          const auto game = generate_game(topo, n, config.actions, gs);
          const Row prefix{std::string(to_string(topo)), std::to_string(n), std::to_string(i), number(gs)};
          const auto row = [&](const std::string& method, const std::string& found, const std::string& status) {
            Row r = prefix;
            r.insert(r.end(), {method, found, status});
            return r;
          };
          std::vector<Row> rows;

          SolverParams params = config.params;
          params.seed = gs;
          double qnash_ms = 0.0;
          try {
            const auto report = find_all_pne(game, config.backend, params);
            qnash_ms = report.timings.total_ms;
            rows.push_back(row(qnash_name, number(report.pne_found.size()), "ok"));
          } catch (const CapExceeded&) {
            rows.push_back(row(qnash_name, "", "cap_exceeded"));
          }

          try {
            const auto bf = brute_force_sets(game, {true, config.bf_max_combinations});
            rows.push_back(row("bf", number(bf.pne_found.size()), "ok"));
          } catch (const CapExceeded&) {
            rows.push_back(row("bf", "", "cap_exceeded"));
          }

          const auto rs = random_search(game, rs_options(config, qnash_ms, gs));
          rows.push_back(row("rs", number(rs.pne_found.size()), "ok"));
          return rows;
        });
      }
    }
  }
  return {{"topology", "players", "instance", "game_seed", "method", "pne_found", "status"},
          run_cells(cells, config.jobs)};
}

Table variance_runs(const ExperimentConfig& config) {
  config.validate();
  std::vector<Cell> cells;
  for (Topology topo : config.topologies) {
    for (int n : config.players) {
      cells.push_back([&config, topo, n] {
        const std::uint64_t gs = game_seed(config.seed, topo, n, 0);
        const auto game = generate_game(topo, n, config.actions, gs);
        std::string total;
        try {
          total = number(brute_force_sets(game, {true, config.bf_max_combinations}).pne_found.size());
        } catch (const CapExceeded&) {
        }
        std::vector<Row> rows;
        for (int run = 0; run < config.trials; ++run) {
          SolverParams params = config.params;
          params.seed = config.seed + static_cast<std::uint64_t>(run);
          const auto report = find_all_pne(game, config.backend, params);
          rows.push_back({std::string(to_string(topo)), std::to_string(n), number(gs), std::to_string(run),
                          number(params.seed), number(report.pne_found.size()), total});
        }
        return rows;
      });
    }
  }
  return {{"topology", "players", "game_seed", "run", "solver_seed", "pne_found", "pne_total"},
          run_cells(cells, config.jobs)};
}

Table repeats_sweep(const ExperimentConfig& config) {
  config.validate();
  const Topology topo = config.topologies.front();
  const int n = config.players.front();
  const std::uint64_t gs = game_seed(config.seed, topo, n, 0);
  const auto game = generate_game(topo, n, config.actions, gs);
  std::vector<Cell> cells;
  for (int repeats : config.repeat_values) {
    for (int run = 0; run < config.trials; ++run) {
      cells.push_back([&config, &game, repeats, run] {
        SolverParams params = config.params;
        params.num_repeats = repeats;
        params.seed = config.seed + static_cast<std::uint64_t>(run);
        const auto report = find_all_pne(game, config.backend, params);
        return std::vector<Row>{{std::to_string(repeats), std::to_string(run), number(params.seed),
                                 number(report.pne_found.size())}};
      });
    }
  }
  return {{"num_repeats", "run", "solver_seed", "pne_found"}, run_cells(cells, config.jobs)};
}

Table summarize_sweep(const Table& sweep) {
  std::map<int, std::vector<double>> by_repeats;
  std::vector<int> order;
  for (const auto& r : sweep.rows) {
    const int repeats = std::stoi(r.at(0));
    if (!by_repeats.contains(repeats)) order.push_back(repeats);
    by_repeats[repeats].push_back(std::stod(r.at(3)));
  }
  Table out{{"num_repeats", "median", "q1", "q3"}, {}};
  for (int repeats : order) {
    const auto& v = by_repeats[repeats];
    out.rows.push_back({std::to_string(repeats), number(quantile(v, 0.5)), number(quantile(v, 0.25)),
                        number(quantile(v, 0.75))});
  }
  return out;
}

Table phase_timing(const ExperimentConfig& config) {
  config.validate();
  std::vector<Cell> cells;
  for (Topology topo : config.topologies) {
    for (int n : config.players) {
      for (int i = 0; i < config.trials; ++i) {
        cells.push_back([&config, topo, n, i] {
          const std::uint64_t gs = game_seed(config.seed, topo, n, i);
          const auto game = generate_game(topo, n, config.actions, gs);
          SolverParams params = config.params;
          params.seed = gs;
          Row row{std::string(to_string(topo)), std::to_string(n), std::to_string(i), number(gs)};
          try {
            const auto report = find_all_pne(game, config.backend, params);
            const auto& t = report.timings;
            row.insert(row.end(), {number(report.c_b), number(report.num_vars), number(t.best_response_ms),
                                   number(t.qubo_build_ms), number(t.solve_ms), number(t.decode_ms),
                                   number(t.total_ms)});
          } catch (const CapExceeded&) {
            row.insert(row.end(), 7, "");
          }
          try {
            const auto bf = brute_force_sets(game, {true, config.bf_max_combinations});
            row.insert(row.end(), {number(bf.elapsed_ms), "ok"});
          } catch (const CapExceeded&) {
            row.insert(row.end(), {"", "cap_exceeded"});
          }
          return std::vector<Row>{row};
        });
      }
    }
  }
  return {{"topology", "players", "instance", "game_seed", "pointed_sets", "variables", "best_response_ms",
           "qubo_build_ms", "backend_solve_ms", "decode_ms", "total_ms", "bf_ms", "bf_status"},
          run_cells(cells, config.jobs)};
}

}  // namespace qnash
