#pragma once

// Link-based quality metrics and the phase timing harness.

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "holo/model.hpp"
#include "holo/preprocess.hpp"

namespace holo {

struct QualityReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t true_links = 0;
  std::size_t computed_links = 0;
  std::size_t gold_links = 0;
};

/// 2PR / (P + R), or 0 when P + R = 0.
double f1_score(double precision, double recall);

/// An empty computed set has precision 1 if the gold set is empty too, else 0.
/// Recall over an empty gold set is 1.
QualityReport score_links(const LinkSet& computed, const LinkSet& gold);
/// Compares the intra-cluster links of both clusterings. Throws InvalidInput
/// when either has overlapping clusters.
QualityReport score(std::span<const Cluster> computed, std::span<const Cluster> gold);

struct TimingReport {
  std::size_t parallelism = 1;
  std::size_t repetitions = 0;
  double pre = 0.0;
  double dec = 0.0;
  double merge = 0.0;
  double total = 0.0;
  double speedup = 1.0;         // baseline total / total
  double linear_optimum = 1.0;  // parallelism / baseline parallelism
};

struct BenchInput {
  std::vector<Vertex> vertices;
  std::vector<SimEdge> edges;
  PipelineConfig config;
  const TypeDictionary* types = nullptr;
};

/// Runs the whole pipeline `repetitions` times per parallelism level and
/// reports mean phase times. The baseline is parallelism 1 when listed,
/// otherwise the first entry.
std::vector<TimingReport> bench(const BenchInput& input, std::span<const std::size_t> parallelism,
                                std::size_t repetitions = 3);

nlohmann::json to_json(const QualityReport& report);
nlohmann::json to_json(const TimingReport& report);
nlohmann::json to_json(std::span<const TimingReport> reports);

std::string format_quality(const QualityReport& report);
/// Aligned columns, one row per report.
std::string format_timing_table(std::span<const TimingReport> reports);

}  // namespace holo
