#pragma once

// Weighted directed multigraphs with infinite parallel-edge bundles.
//
// Conventions: an edge e goes from s(e) to r(e). A path mu = mu_1 ... mu_n is
// composable when r(mu_{i+1}) = s(mu_i); its range is r(mu_1) and its source
// is s(mu_n). Vertices are paths of length zero with s(v) = r(v) = v.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace kms {

struct VertexId {
  std::uint32_t value = 0;
  auto operator<=>(const VertexId&) const = default;
};

/// Reference to a single edge: either a finite edge or member n of a bundle.
struct EdgeRef {
  static constexpr std::uint32_t kFinite = std::numeric_limits<std::uint32_t>::max();

  std::uint32_t index = 0;          // finite-edge index, or bundle index
  std::uint32_t member = kFinite;   // bundle member number, kFinite for finite edges

  [[nodiscard]] bool is_bundle() const { return member != kFinite; }
  auto operator<=>(const EdgeRef&) const = default;

  static EdgeRef finite(std::uint32_t i) { return {i, kFinite}; }
  static EdgeRef bundle(std::uint32_t b, std::uint32_t n) { return {b, n}; }
};

struct Edge {
  std::string id;
  VertexId src;
  VertexId dst;
  double weight = 1.0;
};

/// a_n = a * r^n for n >= 0.
struct GeometricFamily {
  double a = 2.0;
  double r = 2.0;
};

/// Finitely many explicit weights followed by a tail whose series
/// beta -> sum_{tail} a_n^{-beta} is known in closed form. The closure may
/// return +infinity where the tail diverges.
struct ExplicitTailFamily {
  std::vector<double> head;
  std::function<double(double)> tail_sum;
  std::string description;
};

using BundleFamily = std::variant<GeometricFamily, ExplicitTailFamily>;

/// Countably many parallel edges e_0, e_1, ... from src to dst.
struct EdgeBundle {
  std::string id;
  VertexId src;
  VertexId dst;
  BundleFamily family;

  /// sum_n a_n^{-beta}; +infinity when the series diverges.
  [[nodiscard]] double series(double beta) const;
  /// Smallest weight that can be checked (geometric: a; explicit: min of head).
  [[nodiscard]] std::optional<double> min_known_weight() const;
};

struct GraphOptions {
  /// Every weight must be strictly greater than this constant.
  double weight_floor = 1e-9;
  bool require_weights_above_one = false;
};

struct VertexClass {
  enum class Kind { Source, Regular, InfiniteReceiver };
  Kind kind = Kind::Source;
  std::size_t in_degree = 0;  // finite in-degree; meaningful for Regular

  [[nodiscard]] bool singular() const { return kind != Kind::Regular; }
  bool operator==(const VertexClass&) const = default;
};

[[nodiscard]] std::string to_string(VertexClass c);

class Path;

/// Immutable validated graph. Built through GraphBuilder.
class WeightedGraph {
 public:
  [[nodiscard]] std::size_t vertex_count() const { return vertex_names_.size(); }
  [[nodiscard]] const std::string& vertex_name(VertexId v) const;
  [[nodiscard]] std::optional<VertexId> find_vertex(std::string_view name) const;
  /// Throws InputError on unknown names.
  [[nodiscard]] VertexId vertex(std::string_view name) const;
  [[nodiscard]] std::vector<VertexId> vertices() const;

  [[nodiscard]] std::span<const Edge> edges() const { return edges_; }
  [[nodiscard]] std::span<const EdgeBundle> bundles() const { return bundles_; }
  [[nodiscard]] bool has_bundles() const { return !bundles_.empty(); }

  [[nodiscard]] std::span<const std::uint32_t> in_edges(VertexId v) const {
    return in_edges_.at(v.value);
  }
  [[nodiscard]] std::span<const std::uint32_t> in_bundles(VertexId v) const {
    return in_bundles_.at(v.value);
  }

  [[nodiscard]] VertexId source(EdgeRef e) const;
  [[nodiscard]] VertexId range(EdgeRef e) const;
  /// Weight of a finite edge; UnsupportedPathError for bundle members.
  [[nodiscard]] double weight(EdgeRef e) const;

  /// Resolves "e" or "bundle#n".
  [[nodiscard]] EdgeRef resolve_edge(std::string_view name) const;
  [[nodiscard]] std::string edge_name(EdgeRef e) const;

  [[nodiscard]] Path path(std::vector<EdgeRef> edges) const;
  [[nodiscard]] Path path(std::initializer_list<std::string_view> edge_names) const;
  [[nodiscard]] Path at_vertex(std::string_view name) const;

  [[nodiscard]] const GraphOptions& options() const { return options_; }
  /// True when every finite weight and every checkable bundle weight exceeds 1.
  [[nodiscard]] bool weights_above_one() const;

 private:
  friend class GraphBuilder;
  WeightedGraph() = default;

  GraphOptions options_;
  std::vector<std::string> vertex_names_;
  std::map<std::string, VertexId, std::less<>> vertex_index_;
  std::vector<Edge> edges_;
  std::vector<EdgeBundle> bundles_;
  std::map<std::string, EdgeRef, std::less<>> edge_index_;
  std::vector<std::vector<std::uint32_t>> in_edges_;
  std::vector<std::vector<std::uint32_t>> in_bundles_;
};

class GraphBuilder {
 public:
  explicit GraphBuilder(GraphOptions options = {}) : options_(options) {}

  GraphBuilder& add_vertex(std::string name);
  GraphBuilder& add_edge(std::string id, std::string_view src, std::string_view dst, double weight);
  GraphBuilder& add_bundle(std::string id, std::string_view src, std::string_view dst,
                           BundleFamily family);

  /// Validates and freezes. Throws InputError.
  [[nodiscard]] WeightedGraph build() const;

 private:
  struct PendingEdge {
    std::string id, src, dst;
    double weight;
  };
  struct PendingBundle {
    std::string id, src, dst;
    BundleFamily family;
  };
  GraphOptions options_;
  std::vector<std::string> vertices_;
  std::vector<PendingEdge> edges_;
  std::vector<PendingBundle> bundles_;
};

/// A composable edge sequence, or a vertex for length zero. Source and range
/// are cached so prefix and concatenation tests need no graph.
class Path {
 public:
  static Path at_vertex(VertexId v) { return Path(v, v, {}); }

  [[nodiscard]] std::size_t length() const { return edges_.size(); }
  [[nodiscard]] bool is_vertex() const { return edges_.empty(); }
  [[nodiscard]] VertexId source() const { return source_; }
  [[nodiscard]] VertexId range() const { return range_; }
  [[nodiscard]] std::span<const EdgeRef> edges() const { return edges_; }
  [[nodiscard]] bool uses_bundle() const;

  bool operator==(const Path& other) const {
    return edges_ == other.edges_ && source_ == other.source_ && range_ == other.range_;
  }
  std::strong_ordering operator<=>(const Path& other) const;

 private:
  friend class WeightedGraph;
  friend Path concat(const Path&, const Path&);
  friend std::optional<Path> strip_prefix(const Path&, const Path&);
  Path(VertexId source, VertexId range, std::vector<EdgeRef> edges)
      : source_(source), range_(range), edges_(std::move(edges)) {}

  VertexId source_;
  VertexId range_;
  std::vector<EdgeRef> edges_;
};

/// mu nu; requires s(mu) = r(nu). Throws CompositionError.
[[nodiscard]] Path concat(const Path& mu, const Path& nu);

/// If whole = prefix . rest, returns rest (a vertex path when rest is empty).
[[nodiscard]] std::optional<Path> strip_prefix(const Path& whole, const Path& prefix);

[[nodiscard]] VertexClass vertex_class(const WeightedGraph& g, VertexId v);

/// c(mu): product of edge weights, 1 for vertices. Throws UnsupportedPathError on bundle edges.
[[nodiscard]] double path_weight(const WeightedGraph& g, const Path& mu);
/// log c(mu), used where powers c(mu)^z are needed.
[[nodiscard]] double path_log_weight(const WeightedGraph& g, const Path& mu);

/// r^{-n}(v). Throws InfiniteEnumerationError if the fan-in meets a bundle.
[[nodiscard]] std::vector<Path> paths_into(const WeightedGraph& g, VertexId v, std::size_t n);

/// Every bundle-free path of length <= max_length, ordered by length.
[[nodiscard]] std::vector<Path> all_paths(const WeightedGraph& g, std::size_t max_length);

[[nodiscard]] std::string render_path(const WeightedGraph& g, const Path& mu);

}  // namespace kms
