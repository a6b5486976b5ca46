#include "kms/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

#include "kms/error.hpp"

namespace kms {

namespace {

bool valid_identifier(std::string_view s) {
  if (s.empty()) return false;
  return std::none_of(s.begin(), s.end(), [](char c) {
    return c == '.' || c == '[' || c == ']' || c == '#' || c == '+' || c == '(' || c == ')' ||
           std::isspace(static_cast<unsigned char>(c));
  });
}

}  // namespace

// ---------------------------------------------------------------- bundles

double EdgeBundle::series(double beta) const {
  return std::visit(
      [beta](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, GeometricFamily>) {
          // sum_{n>=0} (a r^n)^{-beta} = a^{-beta} / (1 - r^{-beta})
          const double q = std::pow(f.r, -beta);
          if (q >= 1.0) return std::numeric_limits<double>::infinity();
          return std::pow(f.a, -beta) / (1.0 - q);
        } else {
          double s = 0.0;
          for (double w : f.head) s += std::pow(w, -beta);
          if (f.tail_sum) s += f.tail_sum(beta);
          return s;
        }
      },
      family);
}

std::optional<double> EdgeBundle::min_known_weight() const {
  if (const auto* g = std::get_if<GeometricFamily>(&family)) return g->a;
  const auto& f = std::get<ExplicitTailFamily>(family);
  if (f.head.empty()) return std::nullopt;
  return *std::min_element(f.head.begin(), f.head.end());
}

std::string to_string(VertexClass c) {
  switch (c.kind) {
    case VertexClass::Kind::Source:
      return "source";
    case VertexClass::Kind::Regular:
      return "regular(" + std::to_string(c.in_degree) + ")";
    case VertexClass::Kind::InfiniteReceiver:
      return "infinite-receiver";
  }
  return "?";
}

// ---------------------------------------------------------------- builder

GraphBuilder& GraphBuilder::add_vertex(std::string name) {
  vertices_.push_back(std::move(name));
  return *this;
}

GraphBuilder& GraphBuilder::add_edge(std::string id, std::string_view src, std::string_view dst,
                                     double weight) {
  edges_.push_back({std::move(id), std::string(src), std::string(dst), weight});
  return *this;
}

GraphBuilder& GraphBuilder::add_bundle(std::string id, std::string_view src, std::string_view dst,
                                       BundleFamily family) {
  bundles_.push_back({std::move(id), std::string(src), std::string(dst), std::move(family)});
  return *this;
}

WeightedGraph GraphBuilder::build() const {
  if (vertices_.empty()) throw InputError("graph must have at least one vertex");
  if (!(options_.weight_floor > 0.0)) throw InputError("weight floor must be positive");

  WeightedGraph g;
  g.options_ = options_;
  const double floor = options_.require_weights_above_one ? std::max(1.0, options_.weight_floor)
                                                          : options_.weight_floor;
  const auto floor_msg = [&] {
    return options_.require_weights_above_one ? std::string("requires c(e)>1")
                                              : "requires c(e)>" + std::to_string(floor);
  };

  for (const auto& name : vertices_) {
    if (!valid_identifier(name)) throw InputError("invalid vertex id '" + name + "'");
    const VertexId id{static_cast<std::uint32_t>(g.vertex_names_.size())};
    if (!g.vertex_index_.emplace(name, id).second)
      throw InputError("duplicate vertex id '" + name + "'");
    g.vertex_names_.push_back(name);
  }
  g.in_edges_.resize(g.vertex_names_.size());
  g.in_bundles_.resize(g.vertex_names_.size());

  const auto lookup = [&](const std::string& name, const std::string& owner) {
    auto it = g.vertex_index_.find(name);
    if (it == g.vertex_index_.end())
      throw InputError("edge '" + owner + "' references unknown vertex '" + name + "'");
    return it->second;
  };

  for (const auto& pe : edges_) {
    if (!valid_identifier(pe.id)) throw InputError("invalid edge id '" + pe.id + "'");
    if (!std::isfinite(pe.weight) || !(pe.weight > floor))
      throw InputError("edge '" + pe.id + "' has weight " + std::to_string(pe.weight) + "; " +
                       floor_msg());
    const auto idx = static_cast<std::uint32_t>(g.edges_.size());
    if (!g.edge_index_.emplace(pe.id, EdgeRef::finite(idx)).second)
      throw InputError("duplicate edge id '" + pe.id + "'");
    Edge e{pe.id, lookup(pe.src, pe.id), lookup(pe.dst, pe.id), pe.weight};
    g.in_edges_[e.dst.value].push_back(idx);
    g.edges_.push_back(std::move(e));
  }

  for (const auto& pb : bundles_) {
    if (!valid_identifier(pb.id)) throw InputError("invalid bundle id '" + pb.id + "'");
    const auto idx = static_cast<std::uint32_t>(g.bundles_.size());
    // Bundle ids share the edge namespace; members are addressed as id#n.
    if (!g.edge_index_.emplace(pb.id, EdgeRef::bundle(idx, 0)).second)
      throw InputError("duplicate edge id '" + pb.id + "'");
    if (const auto* geo = std::get_if<GeometricFamily>(&pb.family)) {
      if (!(geo->a > 1.0) || !(geo->r > 1.0) || !std::isfinite(geo->a) || !std::isfinite(geo->r))
        throw InputError("bundle '" + pb.id + "': geometric family needs a > 1 and r > 1");
    } else {
      const auto& f = std::get<ExplicitTailFamily>(pb.family);
      for (double w : f.head)
        if (!std::isfinite(w) || !(w > floor))
          throw InputError("bundle '" + pb.id + "' has weight " + std::to_string(w) + "; " +
                           floor_msg());
    }
    EdgeBundle b{pb.id, lookup(pb.src, pb.id), lookup(pb.dst, pb.id), pb.family};
    g.in_bundles_[b.dst.value].push_back(idx);
    g.bundles_.push_back(std::move(b));
  }
  return g;
}

// ---------------------------------------------------------------- graph

const std::string& WeightedGraph::vertex_name(VertexId v) const {
  if (v.value >= vertex_names_.size()) throw InputError("vertex index out of range");
  return vertex_names_[v.value];
}

std::optional<VertexId> WeightedGraph::find_vertex(std::string_view name) const {
  auto it = vertex_index_.find(name);
  if (it == vertex_index_.end()) return std::nullopt;
  return it->second;
}

VertexId WeightedGraph::vertex(std::string_view name) const {
  auto v = find_vertex(name);
  if (!v) throw InputError("unknown vertex '" + std::string(name) + "'");
  return *v;
}

std::vector<VertexId> WeightedGraph::vertices() const {
  std::vector<VertexId> out(vertex_names_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = VertexId{static_cast<std::uint32_t>(i)};
  return out;
}

VertexId WeightedGraph::source(EdgeRef e) const {
  return e.is_bundle() ? bundles_.at(e.index).src : edges_.at(e.index).src;
}

VertexId WeightedGraph::range(EdgeRef e) const {
  return e.is_bundle() ? bundles_.at(e.index).dst : edges_.at(e.index).dst;
}

double WeightedGraph::weight(EdgeRef e) const {
  if (e.is_bundle())
    throw UnsupportedPathError("bundle edge '" + edge_name(e) + "' has no concrete weight here");
  return edges_.at(e.index).weight;
}

EdgeRef WeightedGraph::resolve_edge(std::string_view name) const {
  const auto hash = name.find('#');
  if (hash == std::string_view::npos) {
    auto it = edge_index_.find(name);
    if (it == edge_index_.end() || it->second.is_bundle())
      throw InputError("unknown edge '" + std::string(name) + "'");
    return it->second;
  }
  const auto base = name.substr(0, hash);
  const auto num = name.substr(hash + 1);
  auto it = edge_index_.find(base);
  if (it == edge_index_.end() || !it->second.is_bundle())
    throw InputError("unknown bundle '" + std::string(base) + "'");
  std::uint32_t n = 0;
  auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), n);
  if (ec != std::errc() || p != num.data() + num.size() || n == EdgeRef::kFinite)
    throw InputError("bad bundle member '" + std::string(name) + "'");
  return EdgeRef::bundle(it->second.index, n);
}

std::string WeightedGraph::edge_name(EdgeRef e) const {
  if (e.is_bundle()) return bundles_.at(e.index).id + "#" + std::to_string(e.member);
  return edges_.at(e.index).id;
}

Path WeightedGraph::path(std::vector<EdgeRef> edges) const {
  if (edges.empty()) throw InputError("empty edge list; use at_vertex for length-0 paths");
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (range(edges[i + 1]) != source(edges[i]))
      throw CompositionError("edges '" + edge_name(edges[i]) + "' and '" +
                             edge_name(edges[i + 1]) + "' are not composable");
  }
  const VertexId s = source(edges.back());
  const VertexId r = range(edges.front());
  return Path(s, r, std::move(edges));
}

Path WeightedGraph::path(std::initializer_list<std::string_view> edge_names) const {
  std::vector<EdgeRef> refs;
  refs.reserve(edge_names.size());
  for (auto n : edge_names) refs.push_back(resolve_edge(n));
  return path(std::move(refs));
}

Path WeightedGraph::at_vertex(std::string_view name) const { return Path::at_vertex(vertex(name)); }

bool WeightedGraph::weights_above_one() const {
  for (const auto& e : edges_)
    if (!(e.weight > 1.0)) return false;
  for (const auto& b : bundles_) {
    if (auto w = b.min_known_weight(); w && !(*w > 1.0)) return false;
  }
  return true;
}

// ---------------------------------------------------------------- paths

bool Path::uses_bundle() const {
  return std::any_of(edges_.begin(), edges_.end(), [](EdgeRef e) { return e.is_bundle(); });
}

std::strong_ordering Path::operator<=>(const Path& other) const {
  if (auto c = edges_.size() <=> other.edges_.size(); c != 0) return c;
  if (auto c = std::lexicographical_compare_three_way(edges_.begin(), edges_.end(),
                                                      other.edges_.begin(), other.edges_.end());
      c != 0)
    return c;
  if (auto c = range_ <=> other.range_; c != 0) return c;
  return source_ <=> other.source_;
}

Path concat(const Path& mu, const Path& nu) {
  if (mu.source() != nu.range())
    throw CompositionError("cannot concatenate: s(mu) != r(nu)");
  if (nu.is_vertex()) return mu;
  if (mu.is_vertex()) return nu;
  std::vector<EdgeRef> edges;
  edges.reserve(mu.length() + nu.length());
  edges.insert(edges.end(), mu.edges_.begin(), mu.edges_.end());
  edges.insert(edges.end(), nu.edges_.begin(), nu.edges_.end());
  return Path(nu.source(), mu.range(), std::move(edges));
}

std::optional<Path> strip_prefix(const Path& whole, const Path& prefix) {
  if (prefix.is_vertex()) {
    if (whole.range() != prefix.range()) return std::nullopt;
    return whole;
  }
  if (whole.length() < prefix.length()) return std::nullopt;
  if (!std::equal(prefix.edges_.begin(), prefix.edges_.end(), whole.edges_.begin()))
    return std::nullopt;
  if (whole.length() == prefix.length()) return Path::at_vertex(whole.source());
  std::vector<EdgeRef> rest(whole.edges_.begin() + static_cast<std::ptrdiff_t>(prefix.length()),
                            whole.edges_.end());
  return Path(whole.source(), prefix.source(), std::move(rest));
}

VertexClass vertex_class(const WeightedGraph& g, VertexId v) {
  if (v.value >= g.vertex_count()) throw InputError("unknown vertex index");
  if (!g.in_bundles(v).empty())
    return {VertexClass::Kind::InfiniteReceiver, g.in_edges(v).size()};
  const auto n = g.in_edges(v).size();
  if (n == 0) return {VertexClass::Kind::Source, 0};
  return {VertexClass::Kind::Regular, n};
}

double path_weight(const WeightedGraph& g, const Path& mu) {
  double w = 1.0;
  for (EdgeRef e : mu.edges()) w *= g.weight(e);
  return w;
}

double path_log_weight(const WeightedGraph& g, const Path& mu) {
  double w = 0.0;
  for (EdgeRef e : mu.edges()) w += std::log(g.weight(e));
  return w;
}

std::vector<Path> paths_into(const WeightedGraph& g, VertexId v, std::size_t n) {
  if (v.value >= g.vertex_count()) throw InputError("unknown vertex index");
  std::vector<Path> current{Path::at_vertex(v)};
  for (std::size_t step = 0; step < n; ++step) {
    std::vector<Path> next;
    for (const auto& mu : current) {
      const VertexId s = mu.source();
      if (!g.in_bundles(s).empty())
        throw InfiniteEnumerationError("r^{-" + std::to_string(n) + "}(" + g.vertex_name(v) +
                                       ") meets the edge bundle into '" + g.vertex_name(s) + "'");
      for (std::uint32_t e : g.in_edges(s))
        next.push_back(concat(mu, g.path({EdgeRef::finite(e)})));
    }
    current = std::move(next);
  }
  return current;
}

std::vector<Path> all_paths(const WeightedGraph& g, std::size_t max_length) {
  std::vector<Path> out;
  std::vector<Path> layer;
  for (VertexId v : g.vertices()) layer.push_back(Path::at_vertex(v));
  for (std::size_t len = 0;; ++len) {
    out.insert(out.end(), layer.begin(), layer.end());
    if (len == max_length) break;
    std::vector<Path> next;
    for (const auto& mu : layer)
      for (std::uint32_t e : g.in_edges(mu.source()))
        next.push_back(concat(mu, g.path({EdgeRef::finite(e)})));
    layer = std::move(next);
  }
  return out;
}

std::string render_path(const WeightedGraph& g, const Path& mu) {
  if (mu.is_vertex()) return g.vertex_name(mu.source());
  std::string s;
  for (std::size_t i = 0; i < mu.length(); ++i) {
    if (i) s += '.';
    s += g.edge_name(mu.edges()[i]);
  }
  return s;
}

}  // namespace kms
