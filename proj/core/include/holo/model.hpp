#pragma once

// Domain types shared by every phase of the clustering workflow.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace holo {

using VertexId = std::uint64_t;
/// A cluster is named after its smallest member.
using ClusterId = VertexId;
using SourceId = std::string;
using SemanticType = std::string;
using PropertyMap = std::map<std::string, std::string>;

struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  bool valid() const noexcept { return lat >= -90.0 && lat <= 90.0 && lon >= -180.0 && lon <= 180.0; }
  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

struct Vertex {
  VertexId id = 0;
  std::string label;
  std::string normalized_label;
  SourceId source;
  std::set<SemanticType> types;
  std::optional<GeoPoint> coords;
  PropertyMap properties;

  friend bool operator==(const Vertex&, const Vertex&) = default;
};

/// Builds a vertex and fills `normalized_label` from `label`.
Vertex make_vertex(VertexId id, std::string label, SourceId source, std::set<SemanticType> types = {},
                   std::optional<GeoPoint> coords = std::nullopt, PropertyMap properties = {});

/// Undirected similarity link stored as (min, max).
struct SimEdge {
  VertexId src = 0;
  VertexId dst = 0;
  double sim = 0.0;

  friend bool operator==(const SimEdge&, const SimEdge&) = default;
};

/// Orients an edge so that src < dst. Self-loops are returned unchanged.
SimEdge make_edge(VertexId a, VertexId b, double sim = 0.0) noexcept;

/// Orients every edge, sorts by (src, dst) and keeps the first occurrence of each pair.
/// Self-loops are kept; removing them is a consistency rule, not a canonical form.
std::vector<SimEdge> canonicalize(std::vector<SimEdge> edges);

/// Vertices sorted by id with O(1) id lookup.
class VertexTable {
 public:
  VertexTable() = default;
  /// Throws InvalidInput on duplicate ids.
  explicit VertexTable(std::vector<Vertex> vertices);

  std::size_t size() const noexcept { return vertices_.size(); }
  bool empty() const noexcept { return vertices_.empty(); }
  bool contains(VertexId id) const { return index_.count(id) != 0; }
  /// Dense index of `id` in [0, size()). Throws InvalidInput when absent.
  std::size_t index_of(VertexId id) const;
  const Vertex& at(VertexId id) const { return vertices_[index_of(id)]; }
  const Vertex& operator[](std::size_t index) const { return vertices_[index]; }

  std::span<const Vertex> all() const noexcept { return vertices_; }
  auto begin() const noexcept { return vertices_.begin(); }
  auto end() const noexcept { return vertices_.end(); }

  /// Replaces the vertex data while keeping ids; `fn` must not change the id.
  template <class Fn>
  void transform(Fn&& fn) {
    for (auto& v : vertices_) fn(v);
  }

 private:
  std::vector<Vertex> vertices_;
  std::unordered_map<VertexId, std::size_t> index_;
};

struct Graph {
  VertexTable vertices;
  std::vector<SimEdge> edges;
};

struct Representative {
  std::string label;
  std::vector<VertexId> members;
  std::set<SourceId> sources;
  std::set<SemanticType> types;
  std::optional<GeoPoint> coords;
  PropertyMap properties;

  friend bool operator==(const Representative&, const Representative&) = default;
};

struct Cluster {
  ClusterId cid = 0;
  std::vector<VertexId> members;  // ascending
  Representative representative;

  friend bool operator==(const Cluster&, const Cluster&) = default;
};

/// Set of unordered vertex pairs, each stored once as (min, max).
class LinkSet {
 public:
  using Pair = std::pair<VertexId, VertexId>;

  LinkSet() = default;
  /// Canonicalizes and deduplicates. Throws InvalidInput on a self-pair.
  explicit LinkSet(std::vector<Pair> pairs);
  static LinkSet from_edges(std::span<const SimEdge> edges);

  std::size_t size() const noexcept { return pairs_.size(); }
  bool empty() const noexcept { return pairs_.empty(); }
  bool contains(VertexId a, VertexId b) const;
  std::size_t intersection_size(const LinkSet& other) const;
  const std::vector<Pair>& pairs() const noexcept { return pairs_; }

  friend bool operator==(const LinkSet&, const LinkSet&) = default;

 private:
  std::vector<Pair> pairs_;  // sorted, unique
};

/// All intra-cluster pairs. Throws InvalidInput when two clusters share a vertex.
LinkSet derive_links(std::span<const Cluster> clusters);

enum class SimilarityProfile { LabelOnly, LabelGeo, MusicWeighted };

std::string to_string(SimilarityProfile profile);
SimilarityProfile parse_similarity_profile(const std::string& text);

struct MusicWeights {
  double title = 0.6;
  double artist = 0.3;
  double album = 0.1;

  friend bool operator==(const MusicWeights&, const MusicWeights&) = default;
};

struct PipelineConfig {
  std::size_t max_sources = 5;  // k
  double refine_min_asim = 0.5;
  double merge_min_sim = 0.75;
  std::size_t blocking_prefix_len = 3;
  double geo_max_km = 1358.0;
  SimilarityProfile similarity_profile = SimilarityProfile::LabelOnly;
  MusicWeights weights;
  double soft_tfidf_threshold = 0.9;
  /// 0 selects the member count of each cluster.
  std::size_t refine_max_iterations = 0;
  std::size_t merge_max_iterations = 1000;
  /// Upper bound on a connected component before all-pairs expansion.
  std::size_t max_component_size = 1000;
  std::size_t parallelism = 1;

  /// Throws ConfigError describing the first violated constraint.
  void validate() const;

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

}  // namespace holo
