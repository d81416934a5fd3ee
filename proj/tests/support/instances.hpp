#pragma once

// Random problem instances shared by the property, oracle and acceptance tests.

#include <vector>

#include "holo/phases.hpp"
#include "holo/preprocess.hpp"
#include "holo/similarity.hpp"
#include "oracles.hpp"
#include "test_rng.hpp"

namespace holo::testing {

struct MergeInstance {
  VertexTable vertices;
  std::vector<Cluster> clusters;
  PipelineConfig cfg;
};

/// Up to `max_clusters` source-consistent clusters over labels that share
/// prefixes often, so blocks hold several candidates.
inline MergeInstance random_merge_instance(TestRng& rng, std::size_t max_clusters = 20) {
  const std::vector<std::string> stems{"lin", "lim", "lei", "ber", "bel"};
  const std::vector<std::string> tails{"", "a", "den", "dau", "zig", "lin", "au", "e"};
  const std::vector<std::string> sources{"A", "B", "C", "D", "E"};
  const std::vector<std::string> types{"t1", "t2"};

  MergeInstance inst;
  inst.cfg.max_sources = rng.between(2, 5);
  inst.cfg.merge_min_sim = rng.range(0.6, 0.95);
  inst.cfg.blocking_prefix_len = rng.between(1, 3);
  if (rng.chance(0.5)) inst.cfg.similarity_profile = SimilarityProfile::LabelGeo;

  std::vector<Vertex> vs;
  std::vector<std::vector<VertexId>> groups;
  const std::size_t n = rng.between(1, max_clusters);
  VertexId next = 1 + rng.below(3);
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t size = rng.between(1, std::min<std::size_t>(2, inst.cfg.max_sources));
    std::vector<std::string> pool = sources;
    std::set<SemanticType> ts;
    if (rng.chance(0.6)) ts.insert(rng.pick(types));
    const std::string label = rng.pick(stems) + rng.pick(tails);
    const GeoPoint base{rng.range(40, 55), rng.range(0, 20)};
    std::vector<VertexId> ids;
    for (std::size_t m = 0; m < size; ++m) {
      const std::size_t si = rng.below(pool.size());
      const std::string src = pool[si];
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(si));
      std::optional<GeoPoint> coords;
      if (rng.chance(0.8)) coords = GeoPoint{base.lat + rng.range(-0.5, 0.5), base.lon + rng.range(-0.5, 0.5)};
      vs.push_back(make_vertex(next, rng.chance(0.8) ? label : label + "s", src, ts, coords));
      ids.push_back(next);
      next += 1 + rng.below(2);
    }
    groups.push_back(ids);
  }
  inst.vertices = VertexTable(vs);
  for (const auto& ids : groups) {
    std::vector<const Vertex*> ms;
    for (VertexId id : ids) ms.push_back(&inst.vertices.at(id));
    Cluster c;
    c.representative = build_representative(ms);
    c.members = c.representative.members;
    c.cid = c.members.front();
    inst.clusters.push_back(std::move(c));
  }
  return inst;
}

/// Small vocabulary of random words; repeated picks give shared tokens.
inline std::vector<std::string> random_vocab(TestRng& rng) {
  std::vector<std::string> v;
  const std::size_t n = rng.between(2, 9);
  for (std::size_t i = 0; i < n; ++i) v.push_back(rng.word(2, 7));
  return v;
}

/// The same documents seen by the library (labels) and by the oracle.
struct RandomCorpus {
  std::vector<Vertex> vertices;
  OracleCorpus oracle;
  IdfStats stats;
};

inline RandomCorpus random_corpus(TestRng& rng, const std::vector<std::string>& vocab, std::size_t max_docs = 50) {
  RandomCorpus c;
  const std::size_t n = rng.between(0, max_docs);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string doc = rng.phrase(1, 5, vocab);
    c.oracle.documents.push_back(doc);
    c.vertices.push_back(make_vertex(i + 1, doc, "A"));
  }
  c.stats = build_idf(c.vertices, "label");
  return c;
}

/// Consistent graph over look-alike place names from sources A-E.
inline Graph random_graph(TestRng& rng, std::size_t max_vertices) {
  const std::vector<std::string> sources{"A", "B", "C", "D", "E"};
  const std::vector<std::string> stems{"lindenau", "lindau", "leipzig", "lindenthal", "berlin", "bern"};
  std::vector<Vertex> vs;
  const std::size_t n = rng.between(1, max_vertices);
  for (std::size_t i = 0; i < n; ++i) {
    std::string label = rng.pick(stems);
    if (rng.chance(0.3)) label += rng.word(1, 2);
    vs.push_back(make_vertex(i + 1, label, rng.pick(sources)));
  }
  std::vector<SimEdge> edges;
  const std::size_t m = rng.below(3 * n + 1);
  for (std::size_t e = 0; e < m; ++e) {
    const VertexId a = 1 + rng.below(n);
    const VertexId b = 1 + rng.below(n);
    if (a != b) edges.push_back(make_edge(a, b, 0.0));
  }
  return validate_consistency(Graph{VertexTable(std::move(vs)), std::move(edges)});
}

}  // namespace holo::testing
