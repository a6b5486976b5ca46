#include "kms/graph_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "kms/error.hpp"

namespace kms {

namespace {

using nlohmann::json;

std::string position(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key))
    throw InputError(where + ": missing key '" + key + "'");
  return obj.at(key);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw InputError(where + ": expected a number");
  return j.get<double>();
}

std::string text(const json& j, const std::string& where) {
  if (!j.is_string()) throw InputError(where + ": expected a string");
  return j.get<std::string>();
}

std::function<double(double)> tail_closure(const json& tail, const std::string& where) {
  const auto family = text(require(tail, "family", where), where + ".family");
  if (family == "none") return [](double) { return 0.0; };
  if (family == "constant") {
    auto f = constant_family(number(require(tail, "value", where), where + ".value"));
    return f.tail_sum;
  }
  if (family == "geometric") {
    const double a = number(require(tail, "a", where), where + ".a");
    const double r = number(require(tail, "r", where), where + ".r");
    if (!(a > 1.0) || !(r > 1.0)) throw InputError(where + ": geometric tail needs a > 1, r > 1");
    return explicit_geometric_tail({}, a, r).tail_sum;
  }
  throw InputError(where + ": unknown tail family '" + family + "'");
}

BundleFamily bundle_family(const json& b, const std::string& where) {
  const auto family = text(require(b, "family", where), where + ".family");
  const json params = b.contains("params") ? b.at("params") : json::object();
  if (family == "geometric") {
    return GeometricFamily{number(require(params, "a", where + ".params"), where + ".params.a"),
                           number(require(params, "r", where + ".params"), where + ".params.r")};
  }
  if (family == "constant")
    return constant_family(number(require(params, "value", where + ".params"), where + ".params.value"));
  if (family == "explicit_tail") {
    ExplicitTailFamily f;
    const auto& head = require(params, "head", where + ".params");
    if (!head.is_array()) throw InputError(where + ".params.head: expected a list");
    for (const auto& w : head) f.head.push_back(number(w, where + ".params.head"));
    f.tail_sum = tail_closure(require(params, "tail", where + ".params"), where + ".params.tail");
    f.description = "explicit";
    return f;
  }
  throw InputError(where + ": unknown bundle family '" + family + "'");
}

}  // namespace

ExplicitTailFamily constant_family(double value) {
  if (!(value > 0.0)) throw InputError("constant family needs a positive weight");
  ExplicitTailFamily f;
  f.tail_sum = [](double) { return std::numeric_limits<double>::infinity(); };
  f.description = "constant " + std::to_string(value);
  return f;
}

ExplicitTailFamily explicit_geometric_tail(std::vector<double> head, double a, double r) {
  ExplicitTailFamily f;
  f.head = std::move(head);
  f.tail_sum = [a, r](double beta) {
    const double q = std::pow(r, -beta);
    if (q >= 1.0) return std::numeric_limits<double>::infinity();
    return std::pow(a, -beta) / (1.0 - q);
  };
  f.description = "geometric tail";
  return f;
}

WeightedGraph parse_graph(std::string_view json_text, GraphOptions options) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw InputError("graph parse error at " + position(json_text, e.byte == 0 ? 0 : e.byte - 1) +
                     ": " + e.what());
  }
  if (!doc.is_object()) throw InputError("graph: top level must be an object");

  GraphBuilder builder(options);
  const auto& vertices = require(doc, "vertices", "graph");
  if (!vertices.is_array()) throw InputError("graph.vertices: expected a list");
  for (const auto& v : vertices) builder.add_vertex(text(v, "graph.vertices"));

  if (doc.contains("edges")) {
    const auto& edges = doc.at("edges");
    if (!edges.is_array()) throw InputError("graph.edges: expected a list");
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const auto where = "graph.edges[" + std::to_string(i) + "]";
      const auto& e = edges[i];
      builder.add_edge(text(require(e, "id", where), where + ".id"),
                       text(require(e, "src", where), where + ".src"),
                       text(require(e, "dst", where), where + ".dst"),
                       number(require(e, "weight", where), where + ".weight"));
    }
  }
  if (doc.contains("bundles")) {
    const auto& bundles = doc.at("bundles");
    if (!bundles.is_array()) throw InputError("graph.bundles: expected a list");
    for (std::size_t i = 0; i < bundles.size(); ++i) {
      const auto where = "graph.bundles[" + std::to_string(i) + "]";
      const auto& b = bundles[i];
      builder.add_bundle(text(require(b, "id", where), where + ".id"),
                         text(require(b, "src", where), where + ".src"),
                         text(require(b, "dst", where), where + ".dst"), bundle_family(b, where));
    }
  }
  return builder.build();
}

WeightedGraph load_graph(const std::filesystem::path& file, GraphOptions options) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot open graph file '" + file.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_graph(buf.str(), options);
  } catch (const InputError& e) {
    throw InputError(file.string() + ": " + e.what());
  }
}

}  // namespace kms
