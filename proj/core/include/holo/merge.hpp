#pragma once

// Cluster merge: blocking on representative label prefixes, candidate
// generation under type/source/size constraints and the iterative best-match
// merge (a delta iteration over a shrinking workset).

#include <map>
#include <span>
#include <string>
#include <vector>

#include "holo/model.hpp"
#include "holo/parallel.hpp"
#include "holo/similarity.hpp"

namespace holo {

inline constexpr const char* kEmptyBlockKey = "∅";

struct MergeTriplet {
  ClusterId cid_a;  // cid_a < cid_b
  ClusterId cid_b;
  double sim;
  std::string block;

  friend bool operator==(const MergeTriplet&, const MergeTriplet&) = default;
};

struct SolutionEntry {
  Cluster cluster;
  bool active = true;
  std::string block;  // fixed when the entry enters the solution set
};

struct MergeState {
  std::map<ClusterId, SolutionEntry> solution;
  std::vector<MergeTriplet> workset;  // sorted by (block, cid_a, cid_b)

  /// Initial solution set and workset for `clusters`.
  static MergeState initial(std::vector<Cluster> clusters, const PipelineConfig& cfg, const FieldStats* stats,
                            Executor& exec);
  std::vector<Cluster> active_clusters() const;
};

/// Outcome of one merge round in a single block.
struct MergeEvent {
  std::size_t round;
  std::string block;
  ClusterId kept;
  ClusterId absorbed;
  double sim;
};

/// First `prefix_len` code points of the representative label; "∅" for an empty label.
std::string blocking_key(const Representative& r, std::size_t prefix_len);

/// Shared type, or at least one side without types.
bool types_compatible(const Representative& a, const Representative& b);

/// A candidate pair must have disjoint sources and a combined source count of at most k.
bool sources_mergeable(const Representative& a, const Representative& b, std::size_t max_sources);

/// Same-block pairs passing the type/source/size checks and scoring at
/// least cfg.merge_min_sim. Sorted by (block, cid_a, cid_b).
std::vector<MergeTriplet> generate_candidates(std::span<const Cluster> clusters, const PipelineConfig& cfg,
                                              const FieldStats* stats, Executor& exec);

/// One round: every block merges its best triplet (ties: smallest
/// (cid_a, cid_b)) into the smaller cid, then rewrites, filters and rescores
/// the remaining triplets of that block.
MergeState merge_step(MergeState state, const VertexTable& vertices, const PipelineConfig& cfg,
                      const FieldStats* stats, Executor& exec, std::vector<MergeEvent>* events = nullptr,
                      std::size_t round = 0);

/// Runs merge_step until the workset is empty or cfg.merge_max_iterations
/// rounds have run. Returns the active clusters ordered by cid.
std::vector<Cluster> merge_loop(std::vector<Cluster> clusters, const VertexTable& vertices, const PipelineConfig& cfg,
                                const FieldStats* stats, Executor& exec, std::vector<MergeEvent>* events = nullptr);

}  // namespace holo
