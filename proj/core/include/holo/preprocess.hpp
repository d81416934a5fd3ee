#pragma once

// Preprocessing: label normalization, type harmonization, consistency
// validation, input-edge scoring and 1:1 link enforcement.

#include <map>
#include <set>
#include <string>
#include <string_view>

#include "holo/model.hpp"
#include "holo/parallel.hpp"

namespace holo {

struct FieldStats;

/// Lowercases, strips combining marks after canonical decomposition, replaces
/// punctuation by spaces and collapses whitespace.
std::string normalize_label(std::string_view text);

/// Raw type -> harmonized type. Lookups ignore case.
class TypeDictionary {
 public:
  TypeDictionary() = default;

  /// Throws InvalidInput when `raw` is already mapped to a different type.
  void add(std::string_view raw, std::string_view harmonized);
  /// Harmonized type for `raw`, or `raw` itself when unmapped.
  SemanticType lookup(std::string_view raw) const;
  bool contains(std::string_view raw) const;
  std::size_t size() const noexcept { return entries_.size(); }

  /// city/town/suburb/village/... -> settlement and a few other geographic groups.
  static TypeDictionary default_geo();

 private:
  std::map<std::string, SemanticType> entries_;  // lowercase keys
};

std::set<SemanticType> harmonize_types(const std::set<std::string>& types, const TypeDictionary& dict);

/// Recomputes normalized labels and harmonizes types in place.
void normalize_vertices(VertexTable& vertices, const TypeDictionary* dict);

/// Drops self-loops, duplicate pairs and edges between vertices of the same
/// source. Throws InvalidInput naming the first dangling endpoint.
Graph validate_consistency(Graph graph);

/// Replaces every edge similarity by the recomputed vertex similarity.
Graph score_input_edges(Graph graph, const PipelineConfig& cfg, const FieldStats* stats, Executor& exec);

/// Keeps, for every vertex and each foreign source, only the best-scored
/// link (ties: smaller neighbor id). An edge survives only when both
/// endpoints keep it; pruning repeats until nothing changes.
Graph enforce_one_to_one(Graph graph, Executor& exec);

}  // namespace holo
