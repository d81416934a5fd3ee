#pragma once

#include <filesystem>
#include <vector>

#include "holo/config.hpp"
#include "holo/io.hpp"
#include "holo/model.hpp"

namespace holo::testing {

inline std::filesystem::path data_dir() { return HOLO_TEST_DATA_DIR; }

/// Seven vertices over sources A-D with six input links; see tests/data/running_example.
struct RunningExample {
  std::vector<Vertex> vertices;
  std::vector<SimEdge> edges;
  PipelineConfig config;
};

inline RunningExample running_example() {
  const auto dir = data_dir() / "running_example";
  return {io::read_vertices(dir / "vertices.jsonl"), io::read_edges(dir / "edges.jsonl"),
          load_config(dir / "config.txt")};
}

inline Cluster make_cluster(std::vector<VertexId> members) {
  Cluster c;
  c.members = std::move(members);
  c.cid = c.members.front();
  c.representative.members = c.members;
  return c;
}

}  // namespace holo::testing
