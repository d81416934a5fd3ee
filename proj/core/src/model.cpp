#include "holo/model.hpp"

#include <algorithm>
#include <cmath>

#include "holo/error.hpp"
#include "holo/preprocess.hpp"

namespace holo {

Vertex make_vertex(VertexId id, std::string label, SourceId source, std::set<SemanticType> types,
                   std::optional<GeoPoint> coords, PropertyMap properties) {
  Vertex v;
  v.id = id;
  v.normalized_label = normalize_label(label);
  v.label = std::move(label);
  v.source = std::move(source);
  v.types = std::move(types);
  v.coords = coords;
  v.properties = std::move(properties);
  return v;
}

SimEdge make_edge(VertexId a, VertexId b, double sim) noexcept {
  return a <= b ? SimEdge{a, b, sim} : SimEdge{b, a, sim};
}

std::vector<SimEdge> canonicalize(std::vector<SimEdge> edges) {
  for (auto& e : edges) e = make_edge(e.src, e.dst, e.sim);
  std::stable_sort(edges.begin(), edges.end(), [](const SimEdge& x, const SimEdge& y) {
    return std::pair(x.src, x.dst) < std::pair(y.src, y.dst);
  });
  auto last = std::unique(edges.begin(), edges.end(),
                          [](const SimEdge& x, const SimEdge& y) { return x.src == y.src && x.dst == y.dst; });
  edges.erase(last, edges.end());
  return edges;
}

VertexTable::VertexTable(std::vector<Vertex> vertices) : vertices_(std::move(vertices)) {
  std::sort(vertices_.begin(), vertices_.end(), [](const Vertex& a, const Vertex& b) { return a.id < b.id; });
  index_.reserve(vertices_.size());
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (i > 0 && vertices_[i].id == vertices_[i - 1].id) {
      throw InvalidInput("duplicate vertex id " + std::to_string(vertices_[i].id));
    }
    index_.emplace(vertices_[i].id, i);
  }
}

std::size_t VertexTable::index_of(VertexId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw InvalidInput("unknown vertex id " + std::to_string(id));
  return it->second;
}

LinkSet::LinkSet(std::vector<Pair> pairs) : pairs_(std::move(pairs)) {
  for (auto& p : pairs_) {
    if (p.first == p.second) throw InvalidInput("self-link on vertex " + std::to_string(p.first));
    if (p.first > p.second) std::swap(p.first, p.second);
  }
  std::sort(pairs_.begin(), pairs_.end());
  pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
}

LinkSet LinkSet::from_edges(std::span<const SimEdge> edges) {
  std::vector<Pair> pairs;
  pairs.reserve(edges.size());
  for (const auto& e : edges) pairs.emplace_back(e.src, e.dst);
  return LinkSet(std::move(pairs));
}

bool LinkSet::contains(VertexId a, VertexId b) const {
  if (a > b) std::swap(a, b);
  return std::binary_search(pairs_.begin(), pairs_.end(), Pair{a, b});
}

std::size_t LinkSet::intersection_size(const LinkSet& other) const {
  std::size_t count = 0;
  auto i = pairs_.begin();
  auto j = other.pairs_.begin();
  while (i != pairs_.end() && j != other.pairs_.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

LinkSet derive_links(std::span<const Cluster> clusters) {
  std::unordered_map<VertexId, ClusterId> owner;
  std::vector<LinkSet::Pair> pairs;
  for (const auto& c : clusters) {
    for (VertexId v : c.members) {
      auto [it, inserted] = owner.emplace(v, c.cid);
      if (!inserted) {
        throw InvalidInput("vertex " + std::to_string(v) + " appears in clusters " + std::to_string(it->second) +
                           " and " + std::to_string(c.cid));
      }
    }
    for (std::size_t i = 0; i < c.members.size(); ++i) {
      for (std::size_t j = i + 1; j < c.members.size(); ++j) pairs.emplace_back(c.members[i], c.members[j]);
    }
  }
  return LinkSet(std::move(pairs));
}

std::string to_string(SimilarityProfile profile) {
  switch (profile) {
    case SimilarityProfile::LabelOnly:
      return "label-only";
    case SimilarityProfile::LabelGeo:
      return "label+geo";
    case SimilarityProfile::MusicWeighted:
      return "music-weighted";
  }
  return "label-only";
}

SimilarityProfile parse_similarity_profile(const std::string& text) {
  if (text == "label-only") return SimilarityProfile::LabelOnly;
  if (text == "label+geo") return SimilarityProfile::LabelGeo;
  if (text == "music-weighted") return SimilarityProfile::MusicWeighted;
  throw ConfigError("unknown similarity profile '" + text + "' (expected label-only, label+geo, music-weighted)");
}

void PipelineConfig::validate() const {
  auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (max_sources < 2) throw ConfigError("k (max sources per cluster) must be >= 2");
  if (!unit(refine_min_asim)) throw ConfigError("refine_min_asim must be in [0,1]");
  if (!unit(merge_min_sim)) throw ConfigError("merge_min_sim must be in [0,1]");
  if (blocking_prefix_len < 1) throw ConfigError("blocking_prefix_len must be >= 1");
  if (!(geo_max_km > 0.0)) throw ConfigError("geo_max_km must be > 0");
  if (!(soft_tfidf_threshold > 0.0 && soft_tfidf_threshold <= 1.0)) {
    throw ConfigError("soft_tfidf_threshold must be in (0,1]");
  }
  if (parallelism < 1) throw ConfigError("parallelism must be >= 1");
  if (max_component_size < 1) throw ConfigError("max_component_size must be >= 1");
  if (similarity_profile == SimilarityProfile::MusicWeighted) {
    if (!unit(weights.title) || !unit(weights.artist) || !unit(weights.album)) {
      throw ConfigError("music weights must be in [0,1]");
    }
    double sum = weights.title + weights.artist + weights.album;
    if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("music weights must sum to 1");
  }
}

}  // namespace holo
