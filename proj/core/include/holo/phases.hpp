#pragma once

// Initial clustering and cluster decomposition: connected components,
// intra-cluster edges, type-based grouping, similarity-based refinement and
// representative construction.

#include <span>
#include <string>
#include <vector>

#include "holo/model.hpp"
#include "holo/parallel.hpp"
#include "holo/similarity.hpp"

namespace holo {

/// Total map from the vertices of a VertexTable (by dense index) to cluster ids.
class Assignment {
 public:
  struct Group {
    ClusterId cid;
    std::vector<std::size_t> members;  // dense indices, ascending
  };

  Assignment() = default;
  /// Every vertex in its own cluster.
  explicit Assignment(const VertexTable& vertices);

  std::size_t size() const noexcept { return ids_.size(); }
  VertexId vertex(std::size_t index) const { return ids_[index]; }
  ClusterId cid(std::size_t index) const { return cids_[index]; }
  void set(std::size_t index, ClusterId cid) { cids_[index] = cid; }
  ClusterId cid_of(VertexId id) const;

  /// Groups ordered by cid.
  std::vector<Group> groups() const;
  /// Renames every group to its smallest member id.
  void canonicalize();

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<VertexId> ids_;  // ascending, aligned with the VertexTable
  std::vector<ClusterId> cids_;
};

/// Tuple emitted by a typeless vertex for each edge to a typed cluster member.
struct TypeCandidate {
  VertexId vertex;
  double sim;
  SemanticType type;
  ClusterId cid;
};

/// Components of the edge graph; each is named after its smallest vertex id.
Assignment connected_components(const Graph& graph, Executor& exec);

/// All member pairs of every cluster, scored with vertex_similarity. Throws
/// InvalidInput when a cluster exceeds cfg.max_component_size.
std::vector<SimEdge> intra_cluster_edges(const Graph& graph, const Assignment& assignment, const PipelineConfig& cfg,
                                         const FieldStats* stats, Executor& exec);

/// Splits every cluster so typed vertices sharing a type (transitively) stay
/// together. Typeless vertices are parked in singleton placeholders for
/// assign_untyped.
Assignment type_group(const Assignment& assignment, const VertexTable& vertices, Executor& exec);

/// Moves each typeless vertex into the typed group it is most similar to
/// (ties: smaller cid). Typeless vertices without any typed neighbor stay
/// together with their typeless neighbors. Cluster ids are canonicalized.
Assignment assign_untyped(const Assignment& typed, const VertexTable& vertices, std::span<const SimEdge> intra_edges,
                          Executor& exec, std::vector<TypeCandidate>* winners = nullptr);

struct RefinementStep {
  ClusterId cluster;  // cid before the removal
  VertexId vertex;
  double asim;
  std::size_t superstep;
  bool source_conflict;  // removed to restore source uniqueness or the k bound
};

/// Repeatedly isolates the vertex with the lowest average similarity to its
/// active co-members while that average is below cfg.refine_min_asim
/// (ties: larger id first). Clusters with a repeated source or more than k
/// members first shed the lowest-asim vertex among the offending ones,
/// independent of the threshold.
Assignment refine_by_similarity(const Assignment& assignment, const VertexTable& vertices,
                                std::span<const SimEdge> intra_edges, const PipelineConfig& cfg, Executor& exec,
                                std::vector<RefinementStep>* trace = nullptr);

/// Fuses member properties: majority label and property values (ties:
/// longest, then lexicographically smallest), mean coordinates, union of
/// sources and types.
Representative build_representative(std::span<const Vertex* const> members);

/// Materializes clusters with representatives, ordered by cid.
std::vector<Cluster> build_clusters(const Assignment& assignment, const VertexTable& vertices, Executor& exec);

}  // namespace holo
