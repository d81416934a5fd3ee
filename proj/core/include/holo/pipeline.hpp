#pragma once

// End-to-end workflow: preprocessing, decomposition and merge.

#include <optional>
#include <vector>

#include "holo/merge.hpp"
#include "holo/model.hpp"
#include "holo/parallel.hpp"
#include "holo/phases.hpp"
#include "holo/preprocess.hpp"
#include "holo/similarity.hpp"

namespace holo {

/// Wall-clock seconds per phase, measured from in-memory input to in-memory output.
struct PhaseTimings {
  double pre = 0.0;
  double dec = 0.0;
  double merge = 0.0;
  double total = 0.0;
};

/// Results of every phase, kept when RunOptions::keep_intermediates is set.
struct Intermediates {
  Graph preprocessed;
  Assignment components;
  std::vector<SimEdge> intra_edges;
  Assignment typed;  // after type_group and assign_untyped
  std::vector<TypeCandidate> type_winners;
  Assignment refined;
  std::vector<RefinementStep> refinement;
  std::vector<Cluster> decomposed;
  std::vector<MergeTriplet> merge_candidates;  // initial workset
  std::vector<MergeEvent> merges;
};

struct RunOptions {
  bool skip_merge = false;
  bool keep_intermediates = false;
};

struct PipelineResult {
  std::vector<Cluster> clusters;  // ordered by cid
  PhaseTimings timings;
  std::optional<Intermediates> intermediates;
};

/// `types` may be null (no harmonization). The executor's parallelism is used
/// as is; cfg.parallelism only matters to the overload that creates one.
PipelineResult run_pipeline(std::vector<Vertex> vertices, std::vector<SimEdge> edges, const PipelineConfig& cfg,
                            const TypeDictionary* types, const RunOptions& options, Executor& exec);
PipelineResult run_pipeline(std::vector<Vertex> vertices, std::vector<SimEdge> edges, const PipelineConfig& cfg,
                            const TypeDictionary* types = nullptr, const RunOptions& options = {});

}  // namespace holo
