#include "holo/pipeline.hpp"

#include <chrono>

namespace holo {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

PipelineResult run_pipeline(std::vector<Vertex> vertices, std::vector<SimEdge> edges, const PipelineConfig& cfg,
                            const TypeDictionary* types, const RunOptions& options, Executor& exec) {
  cfg.validate();
  PipelineResult result;
  std::optional<Intermediates> inter;
  if (options.keep_intermediates) inter.emplace();

  const auto start = Clock::now();
  Graph graph{VertexTable(std::move(vertices)), std::move(edges)};
  normalize_vertices(graph.vertices, types);
  graph = validate_consistency(std::move(graph));
  std::optional<FieldStats> stats;
  if (cfg.similarity_profile == SimilarityProfile::MusicWeighted) stats = FieldStats::build(graph.vertices.all());
  const FieldStats* stats_ptr = stats ? &*stats : nullptr;
  graph = score_input_edges(std::move(graph), cfg, stats_ptr, exec);
  graph = enforce_one_to_one(std::move(graph), exec);
  result.timings.pre = seconds_since(start);

  const auto dec_start = Clock::now();
  Assignment components = connected_components(graph, exec);
  std::vector<SimEdge> intra = intra_cluster_edges(graph, components, cfg, stats_ptr, exec);
  std::vector<TypeCandidate> winners;
  Assignment typed = type_group(components, graph.vertices, exec);
  typed = assign_untyped(typed, graph.vertices, intra, exec, inter ? &winners : nullptr);
  std::vector<RefinementStep> trace;
  Assignment refined = refine_by_similarity(typed, graph.vertices, intra, cfg, exec, inter ? &trace : nullptr);
  std::vector<Cluster> clusters = build_clusters(refined, graph.vertices, exec);
  result.timings.dec = seconds_since(dec_start);

  if (inter) {
    inter->components = std::move(components);
    inter->intra_edges = std::move(intra);
    inter->typed = std::move(typed);
    inter->type_winners = std::move(winners);
    inter->refined = std::move(refined);
    inter->refinement = std::move(trace);
    inter->decomposed = clusters;
  }

  if (!options.skip_merge) {
    const auto merge_start = Clock::now();
    MergeState state = MergeState::initial(std::move(clusters), cfg, stats_ptr, exec);
    if (inter) inter->merge_candidates = state.workset;
    std::vector<MergeEvent>* events = inter ? &inter->merges : nullptr;
    for (std::size_t round = 0; round < cfg.merge_max_iterations && !state.workset.empty(); ++round) {
      state = merge_step(std::move(state), graph.vertices, cfg, stats_ptr, exec, events, round);
    }
    clusters = state.active_clusters();
    result.timings.merge = seconds_since(merge_start);
  }
  result.timings.total = seconds_since(start);

  result.clusters = std::move(clusters);
  if (inter) {
    inter->preprocessed = std::move(graph);
    result.intermediates = std::move(inter);
  }
  return result;
}

PipelineResult run_pipeline(std::vector<Vertex> vertices, std::vector<SimEdge> edges, const PipelineConfig& cfg,
                            const TypeDictionary* types, const RunOptions& options) {
  Executor exec(cfg.parallelism);
  return run_pipeline(std::move(vertices), std::move(edges), cfg, types, options, exec);
}

}  // namespace holo
