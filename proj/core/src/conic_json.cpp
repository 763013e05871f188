#include "nscost/conic_json.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace nscost::conic {

namespace {

using nlohmann::json;

json entries_to_json(const SparseBlockMatrix& m) {
  json out = json::array();
  for (const auto& e : m) out.push_back({e.block, e.row, e.col, e.value});
  return out;
}

SparseBlockMatrix entries_from_json(const json& j) {
  SparseBlockMatrix out;
  for (const auto& item : j) {
    if (!item.is_array() || item.size() != 4) throw std::invalid_argument("entry must be [block, row, col, value]");
    out.push_back({item[0].get<int>(), item[1].get<int>(), item[2].get<int>(), item[3].get<double>()});
  }
  return out;
}

}  // namespace

std::string to_json(const ConicProblem& problem, int indent) {
  json doc;
  doc["blocks"] = json::array();
  for (const auto& b : problem.blocks) {
    doc["blocks"].push_back({{"kind", b.kind == BlockKind::sdp ? "sdp" : "lp"}, {"size", b.size}});
  }
  doc["objective"] = entries_to_json(problem.objective);
  doc["constraints"] = json::array();
  for (const auto& c : problem.constraints) {
    doc["constraints"].push_back(
        {{"coeffs", entries_to_json(c.coeffs)}, {"sense", c.sense == Sense::eq ? "eq" : "le"}, {"rhs", c.rhs}});
  }
  doc["sense"] = problem.maximize ? "maximize" : "minimize";
  return doc.dump(indent);
}

ConicProblem from_json(const std::string& text) {
  ConicProblem p;
  try {
    const json doc = json::parse(text);
    for (const auto& b : doc.at("blocks")) {
      const auto kind = b.at("kind").get<std::string>();
      if (kind != "sdp" && kind != "lp") throw std::invalid_argument("unknown block kind: " + kind);
      p.blocks.push_back({kind == "sdp" ? BlockKind::sdp : BlockKind::lp, b.at("size").get<int>()});
    }
    p.objective = entries_from_json(doc.at("objective"));
    for (const auto& c : doc.at("constraints")) {
      const auto sense = c.at("sense").get<std::string>();
      if (sense != "eq" && sense != "le") throw std::invalid_argument("unknown constraint sense: " + sense);
      p.constraints.push_back(
          {entries_from_json(c.at("coeffs")), sense == "eq" ? Sense::eq : Sense::le, c.at("rhs").get<double>()});
    }
    const auto sense = doc.value("sense", std::string("minimize"));
    if (sense != "minimize" && sense != "maximize") throw std::invalid_argument("unknown objective sense: " + sense);
    p.maximize = sense == "maximize";
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed problem JSON: ") + e.what());
  }
  p.validate();
  return p;
}

void write_json(const ConicProblem& problem, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << to_json(problem, 1) << '\n';
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

ConicProblem read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

}  // namespace nscost::conic
