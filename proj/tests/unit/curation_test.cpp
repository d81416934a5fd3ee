#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "holo/curation.hpp"
#include "holo/generator.hpp"
#include "holo/io.hpp"
#include "holo/phases.hpp"

using namespace holo;
namespace fs = std::filesystem;

namespace {

std::vector<Vertex> four_sources() {
  return {make_vertex(1, "Lindenau", "A"), make_vertex(2, "Lindenau", "B"), make_vertex(3, "Lindenau", "C"),
          make_vertex(4, "Lindenau", "D"), make_vertex(5, "Lindenthal", "A"), make_vertex(6, "Leipzig", "E")};
}

Cluster cluster_of(const VertexTable& table, std::vector<VertexId> members) {
  std::vector<const Vertex*> vs;
  for (VertexId id : members) vs.push_back(&table.at(id));
  Cluster c;
  c.members = members;
  c.cid = members.front();
  c.representative = build_representative(vs);
  return c;
}

CurationState small_state() {
  auto vertices = four_sources();
  VertexTable table(vertices);
  std::vector<Cluster> cs{cluster_of(table, {1, 2, 3, 4}), cluster_of(table, {5}), cluster_of(table, {6})};
  return CurationState(cs, {}, vertices);
}

int status_of(CurationState& s, const nlohmann::json& j) {
  try {
    s.apply(Decision::from_json(j));
  } catch (const DecisionError& e) {
    return e.status();
  }
  return 200;
}

fs::path temp_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("holo_curation_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Decision, JsonRoundTrip) {
  for (const char* text : {R"({"kind":"approve","cid":1})", R"({"kind":"delete-cluster","cid":4})",
                           R"({"kind":"remove-vertex","cid":1,"vertex":3})",
                           R"({"kind":"split","cid":1,"parts":[[1,2],[3,4]]})", R"({"kind":"merge","cids":[1,5]})"}) {
    const auto j = nlohmann::json::parse(text);
    EXPECT_EQ(Decision::from_json(j).to_json(), j) << text;
  }
}

TEST(Decision, MalformedIs400) {
  for (const char* text : {R"([])", R"({"cid":1})", R"({"kind":"explode","cid":1})", R"({"kind":"approve"})",
                           R"({"kind":"approve","cid":-1})", R"({"kind":"merge","cids":[1]})",
                           R"({"kind":"split","cid":1,"parts":[1,2]})"}) {
    try {
      Decision::from_json(nlohmann::json::parse(text));
      ADD_FAILURE() << text;
    } catch (const DecisionError& e) {
      EXPECT_EQ(e.status(), 400) << text;
    }
  }
}

TEST(Curation, SplitGivesMinimumIdsInPlace) {
  auto s = small_state();
  const auto created = s.apply(Decision::from_json(nlohmann::json::parse(R"({"kind":"split","cid":1,"parts":[[4,2],[3,1]]})")));
  EXPECT_EQ(created, (std::vector<ClusterId>{1, 2}));
  const auto entries = s.entries();
  ASSERT_EQ(entries.size(), 4u);
  EXPECT_EQ(entries[0]->cluster.members, (std::vector<VertexId>{1, 3}));
  EXPECT_EQ(entries[1]->cluster.members, (std::vector<VertexId>{2, 4}));
  EXPECT_EQ(entries[1]->cluster.representative.sources, (std::set<SourceId>{"B", "D"}));
  EXPECT_EQ(entries[0]->status, ReviewStatus::Edited);
  EXPECT_EQ(entries[2]->cluster.cid, 5u);
}

TEST(Curation, StatusCodes) {
  auto s = small_state();
  EXPECT_EQ(status_of(s, {{"kind", "approve"}, {"cid", 99}}), 404);
  EXPECT_EQ(status_of(s, {{"kind", "merge"}, {"cids", {1, 5}}}), 409);  // both hold source A
  EXPECT_EQ(status_of(s, {{"kind", "merge"}, {"cids", {5, 5}}}), 400);
  EXPECT_EQ(status_of(s, {{"kind", "merge"}, {"cids", {5, 77}}}), 404);
  EXPECT_EQ(status_of(s, {{"kind", "split"}, {"cid", 1}, {"parts", {{1, 2, 3, 4}}}}), 400);
  EXPECT_EQ(status_of(s, {{"kind", "split"}, {"cid", 1}, {"parts", {{1, 2}, {3}}}}), 400);
  EXPECT_EQ(status_of(s, {{"kind", "split"}, {"cid", 1}, {"parts", {{1, 2}, {2, 3, 4}}}}), 400);
  EXPECT_EQ(status_of(s, {{"kind", "remove-vertex"}, {"cid", 5}, {"vertex", 5}}), 400);
  EXPECT_EQ(status_of(s, {{"kind", "remove-vertex"}, {"cid", 1}, {"vertex", 6}}), 400);
  // Rejections leave nothing behind.
  EXPECT_TRUE(s.decisions().empty());
  EXPECT_EQ(s.entries().size(), 3u);
  EXPECT_EQ(status_of(s, {{"kind", "merge"}, {"cids", {5, 6}}}), 200);
  EXPECT_EQ(s.decisions().size(), 1u);
}

TEST(Curation, CidCollisionIs409) {
  auto vertices = four_sources();
  VertexTable table(vertices);
  // Hand-edited input whose cids are not member minima.
  Cluster a = cluster_of(table, {1, 2});
  a.cid = 3;
  Cluster b = cluster_of(table, {3, 4});
  b.cid = 2;
  CurationState s({a, b}, {}, vertices);
  EXPECT_EQ(status_of(s, {{"kind", "remove-vertex"}, {"cid", 3}, {"vertex", 1}}), 409);
  EXPECT_EQ(s.entries().size(), 2u);
  EXPECT_EQ(status_of(s, {{"kind", "merge"}, {"cids", {3, 2}}}), 200);
  EXPECT_EQ(s.entries().front()->cluster.cid, 1u);
}

TEST(Curation, RemoveVertexAndDelete) {
  auto s = small_state();
  EXPECT_EQ(s.apply(Decision::from_json({{"kind", "remove-vertex"}, {"cid", 1}, {"vertex", 1}})),
            (std::vector<ClusterId>{1, 2}));
  EXPECT_EQ(s.find(2)->cluster.members, (std::vector<VertexId>{2, 3, 4}));
  EXPECT_EQ(s.find(1)->cluster.members, (std::vector<VertexId>{1}));
  s.apply(Decision::from_json({{"kind", "delete-cluster"}, {"cid", 6}}));
  EXPECT_EQ(s.find(6), nullptr);
  EXPECT_EQ(s.meta()["clusters"], 3);
  EXPECT_EQ(s.meta()["status"]["edited"], 2);
}

TEST(Curation, ApproveKeepsEditedStatus) {
  auto s = small_state();
  s.apply(Decision::from_json({{"kind", "approve"}, {"cid", 5}}));
  EXPECT_EQ(s.find(5)->status, ReviewStatus::Approved);
  s.apply(Decision::from_json({{"kind", "merge"}, {"cids", {5, 6}}}));
  s.apply(Decision::from_json({{"kind", "approve"}, {"cid", 5}}));
  EXPECT_EQ(s.find(5)->status, ReviewStatus::Edited);
}

TEST(Curation, ZeroDecisionExportIsByteIdentical) {
  Executor exec(1);
  const auto data = generate_synthetic(820, {}, {}, exec);
  const auto dir = temp_dir("roundtrip");
  io::write_clusters(dir / "gold.jsonl", data.gold);
  io::write_vertices(dir / "vertices.jsonl", data.vertices);
  const auto state = CurationState::load(dir / "gold.jsonl", dir / "vertices.jsonl", std::nullopt);
  EXPECT_EQ(state.entries().size(), 820u);
  EXPECT_EQ(state.export_jsonl(), slurp(dir / "gold.jsonl"));
  fs::remove_all(dir);
}

TEST(Curation, SplitAndMergeReplayOn820Clusters) {
  Executor exec(1);
  const auto data = generate_synthetic(820, {}, {}, exec);
  const auto dir = temp_dir("replay820");
  io::write_clusters(dir / "gold.jsonl", data.gold);
  io::write_vertices(dir / "vertices.jsonl", data.vertices);
  auto live = CurationState::load(dir / "gold.jsonl", dir / "vertices.jsonl", std::nullopt);

  const Cluster* big = nullptr;
  std::vector<const Cluster*> singles;
  for (const auto& c : data.gold) {
    if (!big && c.members.size() >= 3) big = &c;
    if (c.members.size() == 1) singles.push_back(&c);
  }
  ASSERT_NE(big, nullptr);
  const Cluster* other = nullptr;
  for (std::size_t i = 1; i < singles.size() && !other; ++i) {
    if (singles[i]->representative.sources != singles[0]->representative.sources) other = singles[i];
  }
  ASSERT_NE(other, nullptr);

  DecisionLog log(dir / "decisions.jsonl");
  Decision split;
  split.kind = DecisionKind::Split;
  split.cid = big->cid;
  split.parts = {{big->members.front()}, {big->members.begin() + 1, big->members.end()}};
  Decision merge;
  merge.kind = DecisionKind::Merge;
  merge.pair = {singles[0]->cid, other->cid};
  for (const auto& d : {split, merge}) {
    live.apply(d);
    log.append(d);
  }
  const std::string exported = live.export_jsonl();
  EXPECT_NE(exported, slurp(dir / "gold.jsonl"));
  EXPECT_EQ(live.entries().size(), 820u);

  auto replayed = CurationState::load(dir / "gold.jsonl", dir / "vertices.jsonl", std::nullopt);
  EXPECT_EQ(log.replay(replayed), 2u);
  EXPECT_EQ(replayed.export_jsonl(), exported);
  fs::remove_all(dir);
}

TEST(Curation, ExportIsParsableAfterEdits) {
  auto s = small_state();
  s.apply(Decision::from_json({{"kind", "split"}, {"cid", 1}, {"parts", {{1, 2}, {3, 4}}}}));
  std::istringstream in(s.export_jsonl());
  const auto cs = io::parse_clusters(in);
  ASSERT_EQ(cs.size(), 4u);
  EXPECT_EQ(cs[1].cid, 3u);
}

TEST(DecisionLog, ReplayReproducesExport) {
  const auto dir = temp_dir("log");
  DecisionLog log(dir / "decisions.jsonl");
  {
    auto fresh = small_state();
    EXPECT_EQ(log.replay(fresh), 0u);
  }

  auto live = small_state();
  const std::vector<nlohmann::json> ds{
      {{"kind", "split"}, {"cid", 1}, {"parts", {{1, 2}, {3, 4}}}},
      {{"kind", "merge"}, {"cids", {5, 6}}},
      {{"kind", "approve"}, {"cid", 3}},
      {{"kind", "remove-vertex"}, {"cid", 5}, {"vertex", 6}},
  };
  for (const auto& j : ds) {
    const auto d = Decision::from_json(j);
    live.apply(d);
    log.append(d);
  }
  auto replayed = small_state();
  EXPECT_EQ(log.replay(replayed), ds.size());
  EXPECT_EQ(replayed.export_jsonl(), live.export_jsonl());

  std::ofstream(dir / "decisions.jsonl", std::ios::app) << R"({"kind":"approve","cid":404})" << '\n';
  auto again = small_state();
  EXPECT_THROW(log.replay(again), ParseError);
  fs::remove_all(dir);
}

TEST(Curation, DetailListsMembersAndLinks) {
  auto vertices = four_sources();
  VertexTable table(vertices);
  std::vector<Cluster> cs{cluster_of(table, {1, 2}), cluster_of(table, {5})};
  CurationState s(cs, {}, vertices, {make_edge(1, 2, 0.9), make_edge(2, 5, 0.4)});
  const auto d = s.detail(*s.find(1));
  ASSERT_EQ(d["members"].size(), 2u);
  EXPECT_EQ(d["members"][0]["label"], "Lindenau");
  ASSERT_EQ(d["links"].size(), 2u);
  EXPECT_EQ(d["links"][0]["intra"], true);
  EXPECT_EQ(d["links"][1]["intra"], false);
}
