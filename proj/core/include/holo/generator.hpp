#pragma once

// Synthetic music benchmark: clean base records plus corrupted duplicates
// spread over five sources, with the gold clustering they were derived from.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "holo/model.hpp"
#include "holo/parallel.hpp"

namespace holo {

inline constexpr std::size_t kSyntheticSources = 5;

/// Share of clusters of size 1, 2, ... (index 0 is size 1).
struct SizeDistribution {
  std::vector<double> proportions{0.5, 0.25, 0.125, 0.0625, 0.0625};

  void validate() const;
};

/// Probability that a duplicate receives each corruption kind.
struct CorruptionSpec {
  double year_reformat = 0.5;
  double length_reformat = 0.5;
  double char_edit = 0.4;
  double field_omission = 0.15;
  std::uint64_t seed = 42;

  void validate() const;
};

struct SyntheticDataset {
  std::vector<Vertex> vertices;  // ids 1..N
  std::vector<Cluster> gold;     // ordered by cid
};

/// Number of clusters per size, largest-remainder rounding of n * proportion
/// (remainder ties go to the smaller size).
std::vector<std::size_t> plan_cluster_sizes(std::size_t n_clusters, const SizeDistribution& dist);

/// Deterministic for a fixed seed regardless of the executor's parallelism.
SyntheticDataset generate_synthetic(std::size_t n_clusters, const SizeDistribution& dist, const CorruptionSpec& spec,
                                    Executor& exec);

/// Per cluster, the smallest member linked to every other member.
LinkSet derive_star_links(std::span<const Cluster> gold);

struct LinkNoise {
  double thin = 0.0;   // fraction of links removed
  double wrong = 0.0;  // random cross-source links added, as a fraction of the input count
  std::uint64_t seed = 7;
};

/// Removes round(thin * |links|) links and adds round(wrong * |links|) random
/// cross-source pairs that were not linked before. Output is canonical.
std::vector<SimEdge> perturb_links(const LinkSet& links, std::span<const Vertex> vertices, const LinkNoise& noise);

}  // namespace holo
