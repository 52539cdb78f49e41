#include "qnash/report.hpp"

#include <json.hpp>

namespace qnash {

namespace {

using Json = nlohmann::ordered_json;

Json profiles(const std::vector<GlobalProfile>& pne) {
  Json out = Json::array();
  for (const auto& p : pne) out.push_back(p);
  return out;
}

Json optional_number(const std::optional<std::size_t>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

std::string report_json(const SolveReport& report, bool include_timings) {
  const auto& p = report.params;
  Json backend{
      {"name", to_string(report.backend)},
      {"seed", p.seed},
      {"num_repeats", p.num_repeats},
      {"subproblem_size", p.subproblem_size},
      {"decomposition_inner", to_string(p.decomposition_inner)},
      {"selector_moves", p.selector_moves},
      {"initial_temperature", p.anneal.initial_temperature ? Json(*p.anneal.initial_temperature) : Json(nullptr)},
      {"final_temperature", p.anneal.final_temperature},
      {"sweeps", optional_number(p.anneal.sweeps)},
      {"tabu_tenure", optional_number(p.tabu_tenure)},
      {"tabu_stall_limit", optional_number(p.tabu_stall_limit)},
  };
  Json model{
      {"penalty", report.penalty},
      {"pointed_sets", report.c_b},
      {"variables", report.num_vars},
      {"distinct_samples", report.num_samples},
      {"best_energy", report.best_energy ? Json(*report.best_energy) : Json(nullptr)},
  };
  Json out{{"pne", profiles(report.pne_found)}, {"count", report.pne_found.size()}, {"backend", backend},
           {"model", model}};
  if (include_timings) {
    const auto& t = report.timings;
    out["timings_ms"] = {{"best_response", t.best_response_ms},
                         {"qubo_build", t.qubo_build_ms},
                         {"backend_solve", t.solve_ms},
                         {"decode", t.decode_ms},
                         {"total", t.total_ms}};
  }
  return out.dump(2) + "\n";
}

std::string report_json(const BaselineReport& report, bool include_timings) {
  Json out{{"pne", profiles(report.pne_found)},
           {"count", report.pne_found.size()},
           {"method", report.method},
           {"combinations_examined", report.combinations_examined},
           {"prefixes_pruned", report.prefixes_pruned},
           {"combinations_total", report.combinations_total}};
  if (include_timings) out["timings_ms"] = {{"total", report.elapsed_ms}};
  return out.dump(2) + "\n";
}

}  // namespace qnash
