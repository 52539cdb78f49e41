#include <doctest.h>

#include <json.hpp>
#include <set>

#include "oracles.hpp"
#include "qnash/baselines.hpp"
#include "qnash/bench.hpp"
#include "qnash/report.hpp"

using namespace qnash;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.topologies = {Topology::tree, Topology::road};
  c.players = {6};
  c.trials = 2;
  c.seed = 5;
  c.params.num_repeats = 10;
  c.rs_samples = 500;
  c.rs_timeout = std::chrono::milliseconds(60000);
  return c;
}

}  // namespace

TEST_CASE("solve report JSON lists equilibria and settings") {
  const auto g = oracle::coordination();
  SolverParams params;
  params.num_repeats = 3;
  params.seed = 8;
  const auto report = find_all_pne(g, Backend::sa, params);
  const auto plain = nlohmann::json::parse(report_json(report, false));
  CHECK(plain["pne"] == nlohmann::json::parse("[[0,0],[1,1]]"));
  CHECK(plain["count"] == 2);
  CHECK(plain["backend"]["name"] == "sa");
  CHECK(plain["backend"]["seed"] == 8);
  CHECK(plain["backend"]["num_repeats"] == 3);
  CHECK(plain["backend"]["initial_temperature"].is_null());
  CHECK(plain["model"]["pointed_sets"] == report.c_b);
  CHECK(plain["model"]["best_energy"] == 0);
  CHECK_FALSE(plain.contains("timings_ms"));
  const auto timed = nlohmann::json::parse(report_json(report, true));
  CHECK(timed["timings_ms"]["total"].is_number());
  CHECK(report_json(report, false) == report_json(find_all_pne(g, Backend::sa, params), false));
}

TEST_CASE("baseline report JSON") {
  const auto report = brute_force_sets(oracle::constant_game());
  const auto j = nlohmann::json::parse(report_json(report, false));
  CHECK(j["method"] == "bf");
  CHECK(j["count"] == 4);
  CHECK(j["combinations_total"] == 16.0);
  CHECK_FALSE(j.contains("timings_ms"));
  CHECK(nlohmann::json::parse(report_json(report, true)).contains("timings_ms"));
}

TEST_CASE("game seeds are deterministic and distinct across cells") {
  std::set<std::uint64_t> seen;
  for (Topology t : {Topology::tree, Topology::circle, Topology::road}) {
    for (int n : {6, 8, 10}) {
      for (int i = 0; i < 50; ++i) {
        CHECK(game_seed(1, t, n, i) == game_seed(1, t, n, i));
        seen.insert(game_seed(1, t, n, i));
      }
    }
  }
  CHECK(seen.size() == 450);
  CHECK(game_seed(1, Topology::tree, 6, 0) != game_seed(2, Topology::tree, 6, 0));
}

TEST_CASE("quality grid rows agree with brute force and are reproducible") {
  const auto config = small_config();
  const auto table = quality_grid(config);
  CHECK(table.header.size() == 7);
  REQUIRE(table.rows.size() == 2 * 2 * 3);
  for (std::size_t r = 0; r < table.rows.size(); r += 3) {
    CHECK(table.rows[r][4] == "qnash-sa");
    CHECK(table.rows[r + 1][4] == "bf");
    CHECK(table.rows[r + 2][4] == "rs");
    const auto g = generate_game(parse_topology(table.rows[r][0]), 6, 3, std::stoull(table.rows[r][3]));
    CHECK(table.rows[r + 1][5] == std::to_string(oracle::pne(g).size()));
    CHECK(std::stoul(table.rows[r][5]) <= std::stoul(table.rows[r + 1][5]));
    CHECK(std::stoul(table.rows[r + 2][5]) <= std::stoul(table.rows[r + 1][5]));
  }
  CHECK(quality_grid(config).to_csv() == table.to_csv());
  auto threaded = config;
  threaded.jobs = 3;
  CHECK(quality_grid(threaded).to_csv() == table.to_csv());
}

TEST_CASE("quality grid marks capped brute force") {
  auto config = small_config();
  config.topologies = {Topology::circle};
  config.trials = 1;
  config.bf_max_combinations = 10.0;
  const auto table = quality_grid(config);
  CHECK(table.rows[1][4] == "bf");
  CHECK(table.rows[1][5].empty());
  CHECK(table.rows[1][6] == "cap_exceeded");
}

TEST_CASE("variance runs use consecutive solver seeds") {
  auto config = small_config();
  config.topologies = {Topology::circle};
  config.trials = 3;
  const auto table = variance_runs(config);
  REQUIRE(table.rows.size() == 3);
  for (int run = 0; run < 3; ++run) {
    CHECK(table.rows[run][3] == std::to_string(run));
    CHECK(table.rows[run][4] == std::to_string(config.seed + run));
    CHECK(std::stoul(table.rows[run][5]) <= std::stoul(table.rows[run][6]));
  }
}

TEST_CASE("repeats sweep and its summary") {
  auto config = small_config();
  config.repeat_values = {1, 5};
  config.trials = 3;
  const auto sweep = repeats_sweep(config);
  REQUIRE(sweep.rows.size() == 6);
  CHECK(sweep.rows[0][0] == "1");
  CHECK(sweep.rows[3][0] == "5");

  const Table synthetic{{"num_repeats", "run", "solver_seed", "pne_found"},
                        {{"10", "0", "0", "1"}, {"10", "1", "1", "4"}, {"10", "2", "2", "2"}, {"10", "3", "3", "3"},
                         {"20", "0", "0", "5"}}};
  const auto summary = summarize_sweep(synthetic);
  REQUIRE(summary.rows.size() == 2);
  CHECK(summary.rows[0] == std::vector<std::string>{"10", "2.5", "1.75", "3.25"});
  CHECK(summary.rows[1] == std::vector<std::string>{"20", "5", "5", "5"});
  CHECK(summary.to_csv() == "num_repeats,median,q1,q3\n10,2.5,1.75,3.25\n20,5,5,5\n");
}

TEST_CASE("phase timing reports sizes and non-negative times") {
  auto config = small_config();
  config.trials = 1;
  const auto table = phase_timing(config);
  CHECK(table.header.size() == 13);
  REQUIRE(table.rows.size() == 2);
  for (const auto& row : table.rows) {
    const auto g = generate_game(parse_topology(row[0]), 6, 3, std::stoull(row[3]));
    CHECK(row[4] == std::to_string(collect_b(g).c_b()));
    CHECK(row[5] == std::to_string(oracle::truncated_var_count(g)));
    for (std::size_t c = 6; c <= 11; ++c) CHECK(std::stod(row[c]) >= 0.0);
    CHECK(row[12] == "ok");
  }
}

TEST_CASE("experiment configuration is validated") {
  auto config = small_config();
  config.players.clear();
  CHECK_THROWS_AS(quality_grid(config), std::invalid_argument);
  config = small_config();
  config.trials = 0;
  CHECK_THROWS_AS(variance_runs(config), std::invalid_argument);
  config = small_config();
  config.repeat_values = {0};
  CHECK_THROWS_AS(repeats_sweep(config), std::invalid_argument);
  config = small_config();
  config.params.num_repeats = 0;
  CHECK_THROWS_AS(phase_timing(config), std::invalid_argument);
}
