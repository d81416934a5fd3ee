#include "holo/preprocess.hpp"

#include <algorithm>
#include <cctype>

#include "holo/error.hpp"
#include "holo/similarity.hpp"

namespace holo {
namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

void TypeDictionary::add(std::string_view raw, std::string_view harmonized) {
  auto key = lowercase(raw);
  auto [it, inserted] = entries_.emplace(key, std::string(harmonized));
  if (!inserted && it->second != harmonized) {
    throw InvalidInput("type '" + std::string(raw) + "' mapped to both '" + it->second + "' and '" +
                       std::string(harmonized) + "'");
  }
}

SemanticType TypeDictionary::lookup(std::string_view raw) const {
  auto it = entries_.find(lowercase(raw));
  return it == entries_.end() ? SemanticType(raw) : it->second;
}

bool TypeDictionary::contains(std::string_view raw) const { return entries_.count(lowercase(raw)) != 0; }

TypeDictionary TypeDictionary::default_geo() {
  TypeDictionary d;
  for (const char* t : {"city", "town", "suburb", "village", "hamlet", "municipality", "borough", "locality",
                        "populatedplace", "populated place", "settlement"}) {
    d.add(t, "settlement");
  }
  for (const char* t : {"country", "nation", "sovereign state"}) d.add(t, "country");
  for (const char* t : {"state", "province", "region", "county", "district", "administrativeregion",
                        "administrative region"}) {
    d.add(t, "region");
  }
  for (const char* t : {"island", "isle", "archipelago"}) d.add(t, "island");
  for (const char* t : {"lake", "reservoir", "pond"}) d.add(t, "lake");
  for (const char* t : {"river", "stream", "creek"}) d.add(t, "river");
  for (const char* t : {"mountain", "peak", "hill", "mountain range"}) d.add(t, "mountain");
  return d;
}

std::set<SemanticType> harmonize_types(const std::set<std::string>& types, const TypeDictionary& dict) {
  std::set<SemanticType> out;
  for (const auto& t : types) out.insert(dict.lookup(t));
  return out;
}

void normalize_vertices(VertexTable& vertices, const TypeDictionary* dict) {
  vertices.transform([&](Vertex& v) {
    v.normalized_label = normalize_label(v.label);
    if (dict) v.types = harmonize_types(v.types, *dict);
  });
}

Graph validate_consistency(Graph graph) {
  for (const auto& e : graph.edges) {
    for (VertexId id : {e.src, e.dst}) {
      if (!graph.vertices.contains(id)) {
        throw InvalidInput("edge (" + std::to_string(e.src) + "," + std::to_string(e.dst) +
                           ") references missing vertex " + std::to_string(id));
      }
    }
  }
  auto edges = canonicalize(std::move(graph.edges));
  std::erase_if(edges, [&](const SimEdge& e) {
    return e.src == e.dst || graph.vertices.at(e.src).source == graph.vertices.at(e.dst).source;
  });
  graph.edges = std::move(edges);
  return graph;
}

Graph score_input_edges(Graph graph, const PipelineConfig& cfg, const FieldStats* stats, Executor& exec) {
  exec.for_each_index(graph.edges.size(), [&](std::size_t i) {
    auto& e = graph.edges[i];
    e.sim = vertex_similarity(graph.vertices.at(e.src), graph.vertices.at(e.dst), cfg, stats);
  });
  return graph;
}

Graph enforce_one_to_one(Graph graph, Executor& exec) {
  const auto& table = graph.vertices;
  for (;;) {
    const auto& edges = graph.edges;
    std::vector<std::vector<std::size_t>> incident(table.size());
    for (std::size_t i = 0; i < edges.size(); ++i) {
      incident[table.index_of(edges[i].src)].push_back(i);
      incident[table.index_of(edges[i].dst)].push_back(i);
    }
    // keep_src[i]: the src endpoint keeps edge i; keep_dst likewise.
    std::vector<char> keep_src(edges.size(), 0);
    std::vector<char> keep_dst(edges.size(), 0);

    exec.for_each_index(table.size(), [&](std::size_t vi) {
      const VertexId self = table[vi].id;
      // best edge per neighbor source
      std::map<std::string_view, std::size_t> best;
      for (std::size_t ei : incident[vi]) {
        const auto& e = edges[ei];
        const VertexId other = e.src == self ? e.dst : e.src;
        std::string_view source = table.at(other).source;
        auto it = best.find(source);
        if (it == best.end()) {
          best.emplace(source, ei);
          continue;
        }
        const auto& cur = edges[it->second];
        const VertexId cur_other = cur.src == self ? cur.dst : cur.src;
        if (e.sim > cur.sim || (e.sim == cur.sim && other < cur_other)) it->second = ei;
      }
      for (auto& [source, ei] : best) {
        if (edges[ei].src == self) {
          keep_src[ei] = 1;
        } else {
          keep_dst[ei] = 1;
        }
      }
    });

    std::vector<SimEdge> kept;
    kept.reserve(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (keep_src[i] && keep_dst[i]) kept.push_back(edges[i]);
    }
    if (kept.size() == edges.size()) break;
    graph.edges = std::move(kept);
  }
  return graph;
}

}  // namespace holo
