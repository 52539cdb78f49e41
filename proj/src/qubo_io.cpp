#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "qnash/qubo.hpp"

namespace qnash {

double IsingModel::energy(std::span<const std::int8_t> spins) const {
  if (spins.size() != h.size()) throw std::invalid_argument("spin vector length mismatch");
  double e = offset;
  for (std::size_t i = 0; i < h.size(); ++i) e += h[i] * spins[i];
  for (const auto& [a, b, v] : j) e += v * spins[a] * spins[b];
  return e;
}

IsingModel to_ising(const QuboModel& model) {
  IsingModel ising;
  ising.offset = static_cast<double>(model.offset());
  ising.h.assign(model.num_vars(), 0.0);
  for (std::size_t i = 0; i < model.num_vars(); ++i) {
    const double q = static_cast<double>(model.linear(i));
    ising.h[i] += q / 2;
    ising.offset += q / 2;
  }
  for (const auto& t : model.quadratic()) {
    const double q = static_cast<double>(t.value) / 4;
    ising.j.emplace_back(t.i, t.j, q);
    ising.h[t.i] += q;
    ising.h[t.j] += q;
    ising.offset += q;
  }
  return ising;
}

QuboFormat parse_qubo_format(std::string_view name) {
  if (name == "coo") return QuboFormat::coo;
  if (name == "qbsolv") return QuboFormat::qbsolv;
  throw std::invalid_argument("unknown QUBO format '" + std::string(name) + "'");
}

void write_qubo(std::ostream& out, const QuboModel& model, QuboFormat format) {
  const auto& quad = model.quadratic();
  if (format == QuboFormat::coo) {
    out << "vars " << model.num_vars() << " offset " << model.offset() << '\n';
    std::size_t t = 0;
    for (std::size_t i = 0; i < model.num_vars(); ++i) {
      if (model.linear(i) != 0) out << i << ' ' << i << ' ' << model.linear(i) << '\n';
      for (; t < quad.size() && quad[t].i == i; ++t) {
        out << quad[t].i << ' ' << quad[t].j << ' ' << quad[t].value << '\n';
      }
    }
    return;
  }
  std::size_t diagonal = 0;
  for (Energy v : model.linear()) diagonal += v != 0;
  out << "c offset " << model.offset() << '\n';
  out << "p qubo 0 " << model.num_vars() << ' ' << diagonal << ' ' << quad.size() << '\n';
  for (std::size_t i = 0; i < model.num_vars(); ++i) {
    if (model.linear(i) != 0) out << i << ' ' << i << ' ' << model.linear(i) << '\n';
  }
  for (const auto& q : quad) out << q.i << ' ' << q.j << ' ' << q.value << '\n';
}

void export_qubo(const QuboModel& model, QuboFormat format, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_qubo(out, model, format);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

namespace {

[[noreturn]] void bad_qubo(std::size_t line, const std::string& what) {
  throw std::runtime_error("QUBO file line " + std::to_string(line) + ": " + what);
}

template <typename T>
T parse_int(std::string_view tok, std::size_t line) {
  T v{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    bad_qubo(line, "expected an integer, got '" + std::string(tok) + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

}  // namespace

QuboModel read_qubo(std::istream& in) {
  std::optional<QuboFormat> format;
  std::size_t num_vars = 0;
  Energy offset = 0;
  std::vector<Energy> linear;
  std::vector<QuadraticTerm> quad;
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    const auto tok = split(line);
    if (tok.empty()) continue;
    if (!format) {
      if (tok[0] == "c") {
        if (tok.size() == 3 && tok[1] == "offset") offset = parse_int<Energy>(tok[2], lineno);
        continue;
      }
      if (tok[0] == "vars" && tok.size() == 4 && tok[2] == "offset") {
        format = QuboFormat::coo;
        num_vars = parse_int<std::size_t>(tok[1], lineno);
        offset = parse_int<Energy>(tok[3], lineno);
      } else if (tok[0] == "p" && tok.size() == 6 && tok[1] == "qubo") {
        format = QuboFormat::qbsolv;
        num_vars = parse_int<std::size_t>(tok[3], lineno);
      } else {
        bad_qubo(lineno, "unrecognized header");
      }
      linear.assign(num_vars, 0);
      continue;
    }
    if (tok[0] == "c") continue;
    if (tok.size() != 3) bad_qubo(lineno, "expected 'i j value'");
    const auto i = parse_int<std::size_t>(tok[0], lineno);
    const auto j = parse_int<std::size_t>(tok[1], lineno);
    const auto v = parse_int<Energy>(tok[2], lineno);
    if (i >= num_vars || j >= num_vars) bad_qubo(lineno, "variable index out of range");
    if (i == j) {
      linear[i] += v;
    } else {
      quad.push_back({std::min(i, j), std::max(i, j), v});
    }
  }
  if (!format) throw std::runtime_error("QUBO file has no header");
  return QuboModel(num_vars, offset, std::move(linear), std::move(quad));
}

QuboModel import_qubo(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_qubo(in);
}

}  // namespace qnash
