// qnash: generate graphical games, find their pure Nash equilibria through the
// penalty QUBO, export models, run the exact and random baselines, and produce
// the benchmark tables.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qnash/baselines.hpp"
#include "qnash/bench.hpp"
#include "qnash/best_response.hpp"
#include "qnash/game.hpp"
#include "qnash/qubo.hpp"
#include "qnash/report.hpp"
#include "qnash/solvers.hpp"

namespace {

using namespace qnash;

/// Bad user input that is only detectable after parsing; exits with code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path);
}

std::string format_profile(const GlobalProfile& profile) {
  std::string s = "[";
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(profile[i]);
  }
  return s + "]";
}

std::string ms(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

struct GameArgs {
  std::string topology = "circle";
  int players = 6;
  int actions = 3;
  std::uint64_t seed = 0;
};

struct SolveArgs {
  std::string game;
  std::string backend = "sa";
  std::string inner = "exhaustive";
  int num_repeats = 1;
  std::size_t subproblem_size = 20;
  std::int64_t penalty = 1;
  std::uint64_t seed = 0;
  std::optional<double> initial_temperature;
  double final_temperature = 0.1;
  std::optional<std::size_t> sweeps;
  bool single_bit = false;
  bool full_multiplicity = false;
  bool record_timings = false;
  std::string out;
};

struct ExportArgs {
  std::string game;
  std::string format = "coo";
  std::int64_t penalty = 1;
  bool full_multiplicity = false;
  std::string out;
};

struct BaselineArgs {
  std::string game;
  std::string method = "bf";
  bool no_prune = false;
  std::int64_t timeout_ms = 1000;
  std::optional<std::uint64_t> max_samples;
  std::uint64_t seed = 0;
  bool record_timings = false;
  std::string out;
};

struct BenchArgs {
  std::string table = "quality";
  std::vector<std::string> topologies{"tree", "circle", "road"};
  std::vector<int> players{6, 8, 10};
  int actions = 3;
  int trials = 1;
  std::uint64_t seed = 0;
  std::string backend = "sa";
  int num_repeats = 50;
  std::size_t subproblem_size = 20;
  std::optional<std::int64_t> timeout_ms;
  std::optional<std::uint64_t> rs_samples;
  std::vector<int> repeat_values{10, 20, 50, 100};
  int jobs = 1;
  std::string out;
  std::string summary_out;
};

Backend backend_arg(const std::string& name) {
  try {
    return parse_backend(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

int cmd_generate(const GameArgs& a, const std::string& out) {
  const auto game = generate_game(parse_topology(a.topology), a.players, a.actions, a.seed);
  write_text(out, to_json(game));
  return 0;
}

int cmd_responses(const std::string& game_path, const std::string& out) {
  const auto game = load_game(game_path);
  std::ostringstream text;
  write_jsonl(text, collect_b(game));
  write_text(out, text.str());
  return 0;
}

int cmd_solve(const SolveArgs& a) {
  const Backend backend = backend_arg(a.backend);
  SolverParams params;
  params.num_repeats = a.num_repeats;
  params.subproblem_size = a.subproblem_size;
  params.seed = a.seed;
  params.anneal.initial_temperature = a.initial_temperature;
  params.anneal.final_temperature = a.final_temperature;
  params.anneal.sweeps = a.sweeps;
  params.decomposition_inner = backend_arg(a.inner);
  params.selector_moves = !a.single_bit;
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (a.penalty < 1) throw UsageError("penalty must be a positive integer");
  BuildOptions build{a.penalty, !a.full_multiplicity};

  const auto game = load_game(a.game);
  const auto report = find_all_pne(game, backend, params, build);
  if (!a.out.empty()) write_text(a.out, report_json(report, a.record_timings));

  std::cout << report.pne_found.size() << " PNE found\n";
  for (const auto& p : report.pne_found) std::cout << "  " << format_profile(p) << "\n";
  const auto& t = report.timings;
  std::cout << "pointed sets " << report.c_b << ", variables " << report.num_vars << "\n"
            << "best response " << ms(t.best_response_ms) << " ms\n"
            << "qubo build    " << ms(t.qubo_build_ms) << " ms\n"
            << "backend solve " << ms(t.solve_ms) << " ms\n"
            << "decode        " << ms(t.decode_ms) << " ms\n"
            << "total         " << ms(t.total_ms) << " ms\n";
  return 0;
}

int cmd_export(const ExportArgs& a) {
  QuboFormat format;
  try {
    format = parse_qubo_format(a.format);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (a.penalty < 1) throw UsageError("penalty must be a positive integer");
  const auto game = load_game(a.game);
  const auto compiled = build_qubo(collect_b(game), game, {a.penalty, !a.full_multiplicity});
  std::ostringstream text;
  write_qubo(text, compiled.model, format);
  write_text(a.out, text.str());
  return 0;
}

int cmd_baseline(const BaselineArgs& a) {
  if (a.timeout_ms < 0) throw UsageError("timeout must be non-negative");
  const auto game = load_game(a.game);
  BaselineReport report;
  if (a.method == "oracle") {
    report = oracle_pne(game);
  } else if (a.method == "bf") {
    report = brute_force_sets(game, {!a.no_prune, std::nullopt});
  } else if (a.method == "rs") {
    report = random_search(game, {std::chrono::milliseconds(a.timeout_ms), a.seed, a.max_samples});
  } else {
    throw UsageError("unknown method '" + a.method + "' (expected oracle, bf or rs)");
  }
  if (!a.out.empty()) write_text(a.out, report_json(report, a.record_timings));
  std::cout << report.pne_found.size() << " PNE found\n";
  for (const auto& p : report.pne_found) std::cout << "  " << format_profile(p) << "\n";
  std::cout << "examined " << report.combinations_examined << " in " << ms(report.elapsed_ms) << " ms\n";
  return 0;
}

int cmd_bench(const BenchArgs& a) {
  ExperimentConfig config;
  config.topologies.clear();
  for (const auto& t : a.topologies) config.topologies.push_back(parse_topology(t));
  config.players = a.players;
  config.actions = a.actions;
  config.trials = a.trials;
  config.seed = a.seed;
  config.backend = backend_arg(a.backend);
  config.params.num_repeats = a.num_repeats;
  config.params.subproblem_size = a.subproblem_size;
  if (a.timeout_ms) {
    if (*a.timeout_ms < 0) throw UsageError("timeout must be non-negative");
    config.rs_timeout = std::chrono::milliseconds(*a.timeout_ms);
  }
  config.rs_samples = a.rs_samples;
  config.repeat_values = a.repeat_values;
  config.jobs = a.jobs;
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  Table table;
  if (a.table == "quality") {
    table = quality_grid(config);
  } else if (a.table == "variance") {
    table = variance_runs(config);
  } else if (a.table == "sweep") {
    table = repeats_sweep(config);
    if (!a.summary_out.empty()) write_text(a.summary_out, summarize_sweep(table).to_csv());
  } else if (a.table == "timing") {
    table = phase_timing(config);
  } else {
    throw UsageError("unknown table '" + a.table + "' (expected quality, variance, sweep or timing)");
  }
  write_text(a.out, table.to_csv());
  return 0;
}

void add_game_file(CLI::App* cmd, std::string& path) {
  cmd->add_option("--game", path, "Game file (JSON)")->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pure Nash equilibria of graphical games via a penalty QUBO"};
  app.require_subcommand(1);

  GameArgs gen;
  std::string gen_out;
  auto* generate = app.add_subcommand("generate", "Generate a random graphical game");
  generate->add_option("--topology", gen.topology, "tree, circle or road")->capture_default_str();
  generate->add_option("--players", gen.players, "Number of players")->capture_default_str();
  generate->add_option("--actions", gen.actions, "Actions per player")->capture_default_str();
  generate->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
  generate->add_option("--out", gen_out, "Output file (default stdout)");

  std::string resp_game;
  std::string resp_out;
  auto* responses = app.add_subcommand("responses", "List every player's pointed best-response sets (JSON lines)");
  add_game_file(responses, resp_game);
  responses->add_option("--out", resp_out, "Output file (default stdout)");

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Find pure Nash equilibria through the QUBO");
  add_game_file(solve_cmd, solve.game);
  solve_cmd->add_option("--backend", solve.backend, "exhaustive, sa, tabu or decomp")->capture_default_str();
  solve_cmd->add_option("--inner", solve.inner, "Block solver for decomp: exhaustive, sa or tabu")
      ->capture_default_str();
  solve_cmd->add_option("--num-repeats", solve.num_repeats, "Independent restarts")->capture_default_str();
  solve_cmd->add_option("--subproblem-size", solve.subproblem_size, "Block size for decomp")
      ->capture_default_str();
  solve_cmd->add_option("--penalty", solve.penalty, "Penalty weight A")->capture_default_str();
  solve_cmd->add_option("--seed", solve.seed, "Solver seed")->capture_default_str();
  solve_cmd->add_option("--initial-temperature", solve.initial_temperature, "Annealing start temperature");
  solve_cmd->add_option("--final-temperature", solve.final_temperature, "Annealing end temperature")
      ->capture_default_str();
  solve_cmd->add_option("--sweeps", solve.sweeps, "Annealing sweeps per restart");
  solve_cmd->add_flag("--single-bit", solve.single_bit, "Run heuristics as single-bit solvers on the full model");
  solve_cmd->add_flag("--full-multiplicity", solve.full_multiplicity,
                      "Give every (player, action) multiplicity variables up to C_B");
  solve_cmd->add_flag("--record-timings", solve.record_timings, "Include phase timings in the report file");
  solve_cmd->add_option("--out", solve.out, "Report file (JSON)");

  ExportArgs exp;
  auto* export_cmd = app.add_subcommand("export", "Write the QUBO of a game");
  add_game_file(export_cmd, exp.game);
  export_cmd->add_option("--format", exp.format, "coo or qbsolv")->capture_default_str();
  export_cmd->add_option("--penalty", exp.penalty, "Penalty weight A")->capture_default_str();
  export_cmd->add_flag("--full-multiplicity", exp.full_multiplicity,
                       "Give every (player, action) multiplicity variables up to C_B");
  export_cmd->add_option("--out", exp.out, "Output file (default stdout)");

  BaselineArgs base;
  auto* baseline = app.add_subcommand("baseline", "Run an exact or random baseline");
  add_game_file(baseline, base.game);
  baseline->add_option("--method", base.method, "oracle, bf or rs")->capture_default_str();
  baseline->add_flag("--no-prune", base.no_prune, "Brute force without prefix pruning");
  baseline->add_option("--timeout-ms", base.timeout_ms, "Random search time budget")->capture_default_str();
  baseline->add_option("--max-samples", base.max_samples, "Random search sample budget");
  baseline->add_option("--seed", base.seed, "Random search seed")->capture_default_str();
  baseline->add_flag("--record-timings", base.record_timings, "Include the elapsed time in the report file");
  baseline->add_option("--out", base.out, "Report file (JSON)");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Produce an experiment table as CSV");
  bench_cmd->add_option("table", bench.table, "quality, variance, sweep or timing")->capture_default_str();
  bench_cmd->add_option("--topology", bench.topologies, "Topologies")->capture_default_str();
  bench_cmd->add_option("--players", bench.players, "Player counts")->capture_default_str();
  bench_cmd->add_option("--actions", bench.actions, "Actions per player")->capture_default_str();
  bench_cmd->add_option("--trials", bench.trials, "Games per cell or runs per setting")->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "Base seed")->capture_default_str();
  bench_cmd->add_option("--backend", bench.backend, "Q-Nash backend")->capture_default_str();
  bench_cmd->add_option("--num-repeats", bench.num_repeats, "Restarts per solve")->capture_default_str();
  bench_cmd->add_option("--subproblem-size", bench.subproblem_size, "Block size for decomp")
      ->capture_default_str();
  bench_cmd->add_option("--timeout-ms", bench.timeout_ms,
                        "Random search budget (default: the Q-Nash time of the same game)");
  bench_cmd->add_option("--rs-samples", bench.rs_samples, "Random search sample budget");
  bench_cmd->add_option("--repeats", bench.repeat_values, "num_repeats values for the sweep")
      ->capture_default_str();
  bench_cmd->add_option("--jobs", bench.jobs, "Worker threads")->capture_default_str();
  bench_cmd->add_option("--out", bench.out, "CSV file (default stdout)");
  bench_cmd->add_option("--summary-out", bench.summary_out, "Sweep summary CSV (median and quartiles)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*generate) return cmd_generate(gen, gen_out);
    if (*responses) return cmd_responses(resp_game, resp_out);
    if (*solve_cmd) return cmd_solve(solve);
    if (*export_cmd) return cmd_export(exp);
    if (*baseline) return cmd_baseline(base);
    if (*bench_cmd) return cmd_bench(bench);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const GameError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == GameErrc::invalid_argument ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
