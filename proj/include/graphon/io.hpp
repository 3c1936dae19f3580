#pragma once

#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "graphon/graph.hpp"
#include "graphon/kernel.hpp"
#include "graphon/rational.hpp"

namespace graphon::io {

using json = nlohmann::json;

/// Malformed or unreadable input files.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(Integer(j.dump()));
  throw FormatError("expected a rational as \"p/q\" string or integer, got " + j.dump());
}

inline json rational_to_json(const Rational& q) { return to_string(q); }

/// {"exact": "p/q", "decimal": "..."}
inline json rational_report(const Rational& q) { return {{"exact", to_string(q)}, {"decimal", to_decimal(q)}}; }

inline StepKernel kernel_from_json(const json& j) {
  if (!j.is_object() || !j.contains("sizes") || !j.contains("values"))
    throw FormatError("kernel JSON needs \"sizes\" and \"values\"");
  std::vector<Rational> sizes;
  for (const auto& s : j.at("sizes")) sizes.push_back(rational_from_json(s));
  std::vector<Rational> values;
  const auto& rows = j.at("values");
  if (!rows.is_array() || rows.size() != sizes.size()) throw FormatError("\"values\" must have one row per part");
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != sizes.size()) throw FormatError("\"values\" must be square");
    for (const auto& v : row) values.push_back(rational_from_json(v));
  }
  StepKernel w(std::move(sizes), std::move(values));
  if (j.value("graphon", false) && !w.is_graphon())
    throw DomainError("kernel is marked as a graphon but has values outside [0,1]");
  return w;
}

inline json kernel_to_json(const StepKernel& w) {
  json sizes = json::array(), values = json::array();
  for (const auto& s : w.sizes()) sizes.push_back(rational_to_json(s));
  for (std::size_t i = 0; i < w.parts(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < w.parts(); ++j) row.push_back(rational_to_json(w.value(i, j)));
    values.push_back(std::move(row));
  }
  return {{"sizes", sizes}, {"values", values}, {"graphon", w.is_graphon()}};
}

/// {"colors": [kernel, ...]}
inline ColoringTemplate template_from_json(const json& j) {
  if (!j.is_object() || !j.contains("colors") || !j.at("colors").is_array())
    throw FormatError("template JSON needs a \"colors\" array");
  std::vector<StepKernel> colors;
  for (const auto& c : j.at("colors")) colors.push_back(kernel_from_json(c));
  return ColoringTemplate(std::move(colors));
}

inline json template_to_json(const ColoringTemplate& t) {
  json colors = json::array();
  for (const auto& c : t.colors()) colors.push_back(kernel_to_json(c));
  return {{"k", t.k()}, {"colors", colors}};
}

inline PartWeighting weighting_from_json(const json& j) {
  PartWeighting h;
  for (const auto& x : j) h.weights.push_back(rational_from_json(x));
  return h;
}

inline json weighting_to_json(const PartWeighting& h) {
  json out = json::array();
  for (const auto& x : h.weights) out.push_back(rational_to_json(x));
  return out;
}

/// Plain text: "n m" then m lines "u v" (0-based).
inline SimpleGraph read_graph(std::istream& in) {
  long n = 0, m = 0;
  if (!(in >> n >> m)) throw FormatError("graph file must start with \"n m\"");
  if (n < 1 || m < 0) throw FormatError("graph header has invalid counts");
  std::vector<Edge> edges;
  for (long i = 0; i < m; ++i) {
    long u = 0, v = 0;
    if (!(in >> u >> v)) throw FormatError("graph file ended after " + std::to_string(i) + " of " + std::to_string(m) + " edges");
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
  }
  return SimpleGraph(static_cast<int>(n), std::move(edges));
}

inline void write_graph(std::ostream& out, const SimpleGraph& g) {
  out << g.order() << ' ' << g.size() << '\n';
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json read_json_file(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw FormatError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline SimpleGraph read_graph_file(const std::string& path) {
  std::istringstream in(read_file(path));
  return read_graph(in);
}

}  // namespace graphon::io
