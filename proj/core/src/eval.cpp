#include "holo/eval.hpp"

#include <algorithm>
#include <cstdio>

#include "holo/error.hpp"
#include "holo/pipeline.hpp"

namespace holo {

double f1_score(double precision, double recall) {
  const double sum = precision + recall;
  return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

QualityReport score_links(const LinkSet& computed, const LinkSet& gold) {
  QualityReport r;
  r.computed_links = computed.size();
  r.gold_links = gold.size();
  r.true_links = computed.intersection_size(gold);
  if (computed.empty()) {
    r.precision = gold.empty() ? 1.0 : 0.0;
  } else {
    r.precision = static_cast<double>(r.true_links) / static_cast<double>(r.computed_links);
  }
  r.recall = gold.empty() ? 1.0 : static_cast<double>(r.true_links) / static_cast<double>(r.gold_links);
  r.f1 = f1_score(r.precision, r.recall);
  return r;
}

QualityReport score(std::span<const Cluster> computed, std::span<const Cluster> gold) {
  return score_links(derive_links(computed), derive_links(gold));
}

std::vector<TimingReport> bench(const BenchInput& input, std::span<const std::size_t> parallelism,
                                std::size_t repetitions) {
  if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
  std::vector<TimingReport> reports;
  for (std::size_t p : parallelism) {
    if (p < 1) throw ConfigError("parallelism values must be >= 1");
    PipelineConfig cfg = input.config;
    cfg.parallelism = p;
    Executor exec(p);
    TimingReport r;
    r.parallelism = p;
    r.repetitions = repetitions;
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
      auto result = run_pipeline(input.vertices, input.edges, cfg, input.types, {}, exec);
      r.pre += result.timings.pre;
      r.dec += result.timings.dec;
      r.merge += result.timings.merge;
      r.total += result.timings.total;
    }
    const double n = static_cast<double>(repetitions);
    r.pre /= n;
    r.dec /= n;
    r.merge /= n;
    r.total /= n;
    reports.push_back(r);
  }
  if (reports.empty()) return reports;
  auto base = std::find_if(reports.begin(), reports.end(), [](const TimingReport& r) { return r.parallelism == 1; });
  if (base == reports.end()) base = reports.begin();
  const TimingReport baseline = *base;
  for (auto& r : reports) {
    r.speedup = r.total > 0.0 ? baseline.total / r.total : 1.0;
    r.linear_optimum = static_cast<double>(r.parallelism) / static_cast<double>(baseline.parallelism);
  }
  return reports;
}

nlohmann::json to_json(const QualityReport& r) {
  return {{"precision", r.precision},   {"recall", r.recall},
          {"f1", r.f1},                 {"true_links", r.true_links},
          {"computed_links", r.computed_links}, {"gold_links", r.gold_links}};
}

nlohmann::json to_json(const TimingReport& r) {
  return {{"parallelism", r.parallelism}, {"repetitions", r.repetitions}, {"pre", r.pre},
          {"dec", r.dec},                 {"merge", r.merge},             {"total", r.total},
          {"speedup", r.speedup},         {"linear_optimum", r.linear_optimum}};
}

nlohmann::json to_json(std::span<const TimingReport> reports) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : reports) out.push_back(to_json(r));
  return out;
}

std::string format_quality(const QualityReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "precision %.4f  recall %.4f  f1 %.4f  (true %zu, computed %zu, gold %zu)\n",
                r.precision, r.recall, r.f1, r.true_links, r.computed_links, r.gold_links);
  return buf;
}

std::string format_timing_table(std::span<const TimingReport> reports) {
  std::string out = "parallelism       pre       dec     merge     total   speedup    linear\n";
  char buf[160];
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof buf, "%11zu %9.3f %9.3f %9.3f %9.3f %9.2f %9.2f\n", r.parallelism, r.pre, r.dec,
                  r.merge, r.total, r.speedup, r.linear_optimum);
    out += buf;
  }
  return out;
}

}  // namespace holo
