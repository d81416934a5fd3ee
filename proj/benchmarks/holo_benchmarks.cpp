#include <benchmark/benchmark.h>

#include <map>

#include "holo/generator.hpp"
#include "holo/phases.hpp"
#include "holo/pipeline.hpp"
#include "holo/similarity.hpp"

using namespace holo;

namespace {

struct Dataset {
  std::vector<Vertex> vertices;
  std::vector<SimEdge> edges;
};

const Dataset& dataset(std::size_t clusters) {
  static std::map<std::size_t, Dataset> cache;
  auto it = cache.find(clusters);
  if (it == cache.end()) {
    Executor exec(1);
    auto d = generate_synthetic(clusters, {}, {}, exec);
    Dataset out;
    out.edges = perturb_links(derive_star_links(d.gold), d.vertices, {0.2, 0.05, 7});
    out.vertices = std::move(d.vertices);
    it = cache.emplace(clusters, std::move(out)).first;
  }
  return it->second;
}

void BM_JaroWinkler(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(jaro_winkler("lindenau bei leipzig", "lindenthal bei leipzig"));
  }
}
BENCHMARK(BM_JaroWinkler);

void BM_SoftTfidf(benchmark::State& state) {
  const auto& d = dataset(2000);
  const auto stats = build_idf(d.vertices, "label");
  const std::string a = d.vertices[0].label;
  const std::string b = d.vertices[1].label;
  for (auto _ : state) benchmark::DoNotOptimize(soft_tfidf(a, b, stats, 0.9));
}
BENCHMARK(BM_SoftTfidf);

void BM_MusicSimilarity(benchmark::State& state) {
  const auto& d = dataset(2000);
  const auto stats = FieldStats::build(d.vertices);
  PipelineConfig cfg;
  cfg.similarity_profile = SimilarityProfile::MusicWeighted;
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& e = d.edges[i++ % d.edges.size()];
    benchmark::DoNotOptimize(vertex_similarity(d.vertices[e.src - 1], d.vertices[e.dst - 1], cfg, &stats));
  }
}
BENCHMARK(BM_MusicSimilarity);

void BM_ConnectedComponents(benchmark::State& state) {
  const auto& d = dataset(static_cast<std::size_t>(state.range(0)));
  const Graph g{VertexTable(d.vertices), d.edges};
  Executor exec(static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(connected_components(g, exec));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.vertices.size()));
}
BENCHMARK(BM_ConnectedComponents)->Args({10000, 1})->Args({10000, 4})->Unit(benchmark::kMillisecond);

void BM_Pipeline(benchmark::State& state) {
  const auto& d = dataset(static_cast<std::size_t>(state.range(0)));
  PipelineConfig cfg;
  cfg.similarity_profile = SimilarityProfile::MusicWeighted;
  Executor exec(static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(run_pipeline(d.vertices, d.edges, cfg, nullptr, {}, exec));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.vertices.size()));
}
BENCHMARK(BM_Pipeline)->Args({10000, 1})->Args({10000, 4})->Unit(benchmark::kMillisecond);

}  // namespace

// The packaged benchmark_main archive carries LTO bytecode from another compiler build.
BENCHMARK_MAIN();
