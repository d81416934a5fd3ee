#include <gtest/gtest.h>

#include "holo/error.hpp"
#include "holo/phases.hpp"
#include "holo/pipeline.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "test_rng.hpp"

using namespace holo;

namespace {

std::vector<std::vector<VertexId>> partition(const Assignment& a) {
  std::vector<std::vector<VertexId>> out;
  for (const auto& g : a.groups()) {
    std::vector<VertexId> ids;
    for (std::size_t i : g.members) ids.push_back(a.vertex(i));
    out.push_back(ids);
  }
  return out;
}

Vertex typed(VertexId id, const std::string& label, const std::string& source, std::set<SemanticType> types) {
  return make_vertex(id, label, source, std::move(types));
}

// Preprocessed running example plus its connected components.
struct Prepared {
  Graph graph;
  Assignment components;
  std::vector<SimEdge> intra;
  PipelineConfig cfg;
};

Prepared prepare_running_example(Executor& exec) {
  auto ex = holo::testing::running_example();
  RunOptions opts;
  opts.keep_intermediates = true;
  opts.skip_merge = true;
  auto r = run_pipeline(ex.vertices, ex.edges, ex.config, nullptr, opts, exec);
  auto& in = *r.intermediates;
  return {std::move(in.preprocessed), in.components, in.intra_edges, ex.config};
}

}  // namespace

TEST(ConnectedComponents, RunningExample) {
  Executor exec(2);
  auto p = prepare_running_example(exec);
  EXPECT_EQ(partition(p.components), (std::vector<std::vector<VertexId>>{{1, 2, 3, 4}, {5, 6, 7}}));
  EXPECT_EQ(p.components.cid_of(4), 1u);
  EXPECT_EQ(p.components.cid_of(7), 5u);
}

TEST(ConnectedComponents, EdgelessGraphGivesSingletons) {
  Executor exec(1);
  Graph g{VertexTable({make_vertex(3, "a", "A"), make_vertex(8, "b", "B"), make_vertex(1, "c", "C")}), {}};
  EXPECT_EQ(partition(connected_components(g, exec)), (std::vector<std::vector<VertexId>>{{1}, {3}, {8}}));
}

TEST(ConnectedComponents, MatchesUnionFindOracle) {
  holo::testing::TestRng rng(17);
  Executor exec(4);
  for (int round = 0; round < 200; ++round) {
    const std::size_t n = rng.between(1, 200);
    std::vector<Vertex> vs;
    std::vector<VertexId> ids;
    for (std::size_t i = 0; i < n; ++i) {
      ids.push_back(i * 3 + rng.below(3));
      vs.push_back(make_vertex(ids.back(), "x", "S"));
    }
    std::vector<SimEdge> es;
    const std::size_t m = rng.below(n + 1);
    for (std::size_t i = 0; i < m; ++i) es.push_back(make_edge(rng.pick(ids), rng.pick(ids), 0.5));
    Graph g{VertexTable(vs), es};
    const auto oracle = holo::testing::union_find_components(ids, es);
    const auto got = connected_components(g, exec);
    std::vector<std::vector<VertexId>> expected;
    for (const auto& [cid, members] : oracle) expected.emplace_back(members.begin(), members.end());
    ASSERT_EQ(partition(got), expected);
    for (const auto& grp : got.groups()) EXPECT_EQ(grp.cid, got.vertex(grp.members.front()));
  }
}

TEST(IntraClusterEdges, RunningExampleScores) {
  Executor exec(2);
  auto p = prepare_running_example(exec);
  // {1,2,3,4} gives 6 pairs, {5,6,7} gives 3.
  ASSERT_EQ(p.intra.size(), 9u);
  std::map<std::pair<VertexId, VertexId>, double> sim;
  for (const auto& e : p.intra) sim[{e.src, e.dst}] = e.sim;
  EXPECT_NEAR((sim[{5, 6}]), 0.9, 1e-9);
  EXPECT_NEAR((sim[{5, 7}]), 0.4, 1e-9);
  EXPECT_NEAR((sim[{6, 7}]), 0.3, 1e-9);
}

TEST(IntraClusterEdges, SingletonsProduceNothingAndOversizeThrows) {
  Executor exec(1);
  std::vector<Vertex> vs;
  std::vector<SimEdge> es;
  for (VertexId i = 1; i <= 5; ++i) vs.push_back(make_vertex(i, "x", "S" + std::to_string(i)));
  for (VertexId i = 1; i < 5; ++i) es.push_back({i, i + 1, 1.0});
  Graph g{VertexTable(vs), es};
  PipelineConfig cfg;
  EXPECT_TRUE(intra_cluster_edges(g, Assignment(g.vertices), cfg, nullptr, exec).empty());
  const auto cc = connected_components(g, exec);
  EXPECT_EQ(intra_cluster_edges(g, cc, cfg, nullptr, exec).size(), 10u);
  cfg.max_component_size = 4;
  EXPECT_THROW(intra_cluster_edges(g, cc, cfg, nullptr, exec), InvalidInput);
}

TEST(TypeGroup, RunningExampleSplitsByType) {
  Executor exec(1);
  auto p = prepare_running_example(exec);
  const Assignment typed = type_group(p.components, p.graph.vertices, exec);
  // 2 stays apart from 3 and 4; 1 is typeless and parked on its own.
  EXPECT_EQ(typed.cid_of(2), 2u);
  EXPECT_EQ(typed.cid_of(3), 3u);
  EXPECT_EQ(typed.cid_of(4), 3u);
  EXPECT_EQ(typed.cid_of(1), 1u);
  EXPECT_EQ(typed.cid_of(5), 5u);
  EXPECT_EQ(typed.cid_of(7), 5u);
}

TEST(TypeGroup, OverlappingTypesBridgeGroups) {
  Executor exec(1);
  VertexTable vs({typed(1, "a", "A", {"t1"}), typed(2, "b", "B", {"t1", "t2"}), typed(3, "c", "C", {"t2"}),
                  typed(4, "d", "D", {"t3"})});
  Assignment a(vs);
  for (std::size_t i = 0; i < 4; ++i) a.set(i, 1);
  EXPECT_EQ(partition(type_group(a, vs, exec)), (std::vector<std::vector<VertexId>>{{1, 2, 3}, {4}}));
}

TEST(TypeGroup, TransitiveClosureOracleOnRandomTypes) {
  holo::testing::TestRng rng(5);
  Executor exec(3);
  const std::vector<std::string> pool{"t1", "t2", "t3", "t4", "t5"};
  for (int round = 0; round < 300; ++round) {
    const std::size_t n = rng.between(1, 12);
    std::vector<Vertex> vs;
    for (VertexId i = 1; i <= n; ++i) {
      std::set<SemanticType> ts;
      const auto k = rng.between(1, 2);
      for (std::size_t j = 0; j < k; ++j) ts.insert(rng.pick(pool));
      vs.push_back(typed(i, "x", "S", ts));
    }
    VertexTable table(vs);
    Assignment a(table);
    for (std::size_t i = 0; i < n; ++i) a.set(i, 1);
    // Closure: repeatedly join classes that share a type.
    std::vector<VertexId> cls(n);
    for (std::size_t i = 0; i < n; ++i) cls[i] = i + 1;
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          bool share = false;
          for (const auto& t : vs[i].types) share = share || vs[j].types.count(t);
          if (share && cls[i] != cls[j]) {
            const VertexId lo = std::min(cls[i], cls[j]), hi = std::max(cls[i], cls[j]);
            for (auto& c : cls) {
              if (c == hi) c = lo;
            }
            changed = true;
          }
        }
      }
    }
    const Assignment got = type_group(a, table, exec);
    for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(got.cid(i), cls[i]);
  }
}

TEST(AssignUntyped, RunningExampleJoinsBestTypedGroup) {
  Executor exec(1);
  auto p = prepare_running_example(exec);
  const Assignment tg = type_group(p.components, p.graph.vertices, exec);
  std::vector<TypeCandidate> winners;
  const Assignment a = assign_untyped(tg, p.graph.vertices, p.intra, exec, &winners);
  ASSERT_EQ(winners.size(), 1u);
  EXPECT_EQ(winners[0].vertex, 1u);
  EXPECT_NEAR(winners[0].sim, 1.0, 1e-9);
  EXPECT_EQ(winners[0].type, "t1");
  EXPECT_EQ(winners[0].cid, 2u);
  EXPECT_EQ(partition(a), (std::vector<std::vector<VertexId>>{{1, 2}, {3, 4}, {5, 6, 7}}));
}

TEST(AssignUntyped, TieGoesToSmallerCid) {
  Executor exec(1);
  VertexTable vs({typed(1, "u", "A", {}), typed(3, "a", "B", {"t1"}), typed(9, "b", "C", {"t2"})});
  Assignment a(vs);  // 3 and 9 already in their own typed groups
  const std::vector<SimEdge> intra{{1, 3, 0.7}, {1, 9, 0.7}};
  for (std::size_t i = 0; i < 3; ++i) a.set(i, vs[i].id);
  const Assignment out = assign_untyped(a, vs, intra, exec);
  EXPECT_EQ(out.cid_of(1), 1u);
  EXPECT_EQ(out.cid_of(3), 1u);
  EXPECT_EQ(out.cid_of(9), 9u);
}

TEST(AssignUntyped, IsolatedTypelessVertexStaysSingleton) {
  Executor exec(1);
  VertexTable vs({typed(1, "u", "A", {}), typed(2, "a", "B", {"t1"})});
  const Assignment out = assign_untyped(Assignment(vs), vs, {}, exec);
  EXPECT_EQ(partition(out), (std::vector<std::vector<VertexId>>{{1}, {2}}));
}

TEST(AssignUntyped, TypelessComponentsStayTogether) {
  Executor exec(1);
  VertexTable vs({typed(1, "u", "A", {}), typed(2, "v", "B", {}), typed(3, "w", "C", {})});
  Assignment a(vs);
  const std::vector<SimEdge> intra{{1, 2, 0.9}, {1, 3, 0.8}, {2, 3, 0.7}};
  const Assignment out = assign_untyped(a, vs, intra, exec);
  EXPECT_EQ(partition(out), (std::vector<std::vector<VertexId>>{{1, 2, 3}}));
}

TEST(RefineBySimilarity, RunningExampleIsolatesVertexSeven) {
  Executor exec(1);
  auto p = prepare_running_example(exec);
  Assignment a = type_group(p.components, p.graph.vertices, exec);
  a = assign_untyped(a, p.graph.vertices, p.intra, exec);
  std::vector<RefinementStep> trace;
  const Assignment r = refine_by_similarity(a, p.graph.vertices, p.intra, p.cfg, exec, &trace);
  ASSERT_EQ(trace.size(), 1u);
  EXPECT_EQ(trace[0].vertex, 7u);
  EXPECT_NEAR(trace[0].asim, 0.35, 1e-9);
  EXPECT_NEAR(trace[0].asim, (0.4 + 0.3) / 2, 1e-9);
  EXPECT_FALSE(trace[0].source_conflict);
  EXPECT_EQ(partition(r), (std::vector<std::vector<VertexId>>{{1, 2}, {3, 4}, {5, 6}, {7}}));
}

TEST(RefineBySimilarity, AllAboveThresholdUnchanged) {
  Executor exec(1);
  VertexTable vs({typed(1, "a", "A", {}), typed(2, "b", "B", {}), typed(3, "c", "C", {})});
  Assignment a(vs);
  for (std::size_t i = 0; i < 3; ++i) a.set(i, 1);
  const std::vector<SimEdge> intra{{1, 2, 0.9}, {1, 3, 0.8}, {2, 3, 0.6}};
  EXPECT_EQ(refine_by_similarity(a, vs, intra, PipelineConfig{}, exec), a);
}

TEST(RefineBySimilarity, PairBelowThresholdDropsLargerId) {
  Executor exec(1);
  VertexTable vs({typed(4, "a", "A", {}), typed(8, "b", "B", {})});
  Assignment a(vs);
  a.set(0, 4);
  a.set(1, 4);
  const std::vector<SimEdge> intra{{4, 8, 0.3}};
  std::vector<RefinementStep> trace;
  const Assignment r = refine_by_similarity(a, vs, intra, PipelineConfig{}, exec, &trace);
  ASSERT_EQ(trace.size(), 1u);
  EXPECT_EQ(trace[0].vertex, 8u);
  EXPECT_EQ(partition(r), (std::vector<std::vector<VertexId>>{{4}, {8}}));
}

TEST(RefineBySimilarity, SourceConflictShedsWeakestDuplicate) {
  Executor exec(1);
  VertexTable vs({typed(1, "a", "A", {}), typed(2, "b", "B", {}), typed(3, "c", "B", {})});
  Assignment a(vs);
  for (std::size_t i = 0; i < 3; ++i) a.set(i, 1);
  const std::vector<SimEdge> intra{{1, 2, 0.9}, {1, 3, 0.8}, {2, 3, 0.9}};
  std::vector<RefinementStep> trace;
  const Assignment r = refine_by_similarity(a, vs, intra, PipelineConfig{}, exec, &trace);
  ASSERT_EQ(trace.size(), 1u);
  EXPECT_TRUE(trace[0].source_conflict);
  EXPECT_EQ(trace[0].vertex, 3u);
  EXPECT_EQ(partition(r), (std::vector<std::vector<VertexId>>{{1, 2}, {3}}));
}

TEST(BuildRepresentative, SingletonMirrorsVertex) {
  const Vertex v = make_vertex(5, "Leipzig", "A", {"settlement"}, GeoPoint{51.3, 12.4}, {{"k", "v"}});
  const Vertex* ptr = &v;
  const Representative r = build_representative(std::span<const Vertex* const>(&ptr, 1));
  EXPECT_EQ(r.label, "leipzig");
  EXPECT_EQ(r.members, (std::vector<VertexId>{5}));
  EXPECT_EQ(r.sources, (std::set<SourceId>{"A"}));
  EXPECT_EQ(r.types, (std::set<SemanticType>{"settlement"}));
  EXPECT_EQ(r.coords, v.coords);
  EXPECT_EQ(r.properties, v.properties);
}

TEST(BuildRepresentative, MajorityLabelAndMeanCoordinates) {
  const Vertex a = make_vertex(3, "Leipzig", "A", {}, GeoPoint{50, 10});
  const Vertex b = make_vertex(1, "leipzig", "B", {"t"}, GeoPoint{52, 12});
  const Vertex c = make_vertex(2, "Lepzig", "C");
  std::vector<const Vertex*> ms{&a, &b, &c};
  const Representative r = build_representative(ms);
  EXPECT_EQ(r.label, "leipzig");
  EXPECT_EQ(r.members, (std::vector<VertexId>{1, 2, 3}));
  ASSERT_TRUE(r.coords);
  EXPECT_DOUBLE_EQ(r.coords->lat, 51.0);
  EXPECT_DOUBLE_EQ(r.coords->lon, 11.0);
  EXPECT_EQ(r.sources, (std::set<SourceId>{"A", "B", "C"}));
  EXPECT_EQ(r.types, (std::set<SemanticType>{"t"}));
}

TEST(BuildRepresentative, TiesPreferLongerThenSmaller) {
  const Vertex a = make_vertex(1, "lindau", "A");
  const Vertex b = make_vertex(2, "lindenau", "B");
  std::vector<const Vertex*> ms{&a, &b};
  EXPECT_EQ(build_representative(ms).label, "lindenau");
  const Vertex c = make_vertex(3, "bbb", "C", {}, std::nullopt, {{"year", "1999"}});
  const Vertex d = make_vertex(4, "aaa", "D", {}, std::nullopt, {{"year", "'99"}});
  std::vector<const Vertex*> ns{&c, &d};
  const Representative r = build_representative(ns);
  EXPECT_EQ(r.label, "aaa");
  EXPECT_EQ(r.properties.at("year"), "1999");
  EXPECT_FALSE(r.coords);
}
