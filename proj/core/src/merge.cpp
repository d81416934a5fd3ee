#include "holo/merge.hpp"

#include <algorithm>

#include "holo/error.hpp"
#include "holo/phases.hpp"
#include "holo/text.hpp"

namespace holo {
namespace {

bool triplet_order(const MergeTriplet& x, const MergeTriplet& y) {
  if (x.block != y.block) return x.block < y.block;
  return std::pair(x.cid_a, x.cid_b) < std::pair(y.cid_a, y.cid_b);
}

// Half-open ranges of equal block keys in a sorted workset.
std::vector<std::pair<std::size_t, std::size_t>> block_ranges(const std::vector<MergeTriplet>& workset) {
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  std::size_t begin = 0;
  for (std::size_t i = 1; i <= workset.size(); ++i) {
    if (i == workset.size() || workset[i].block != workset[begin].block) {
      ranges.emplace_back(begin, i);
      begin = i;
    }
  }
  return ranges;
}

Cluster merge_clusters(const Cluster& a, const Cluster& b, const VertexTable& vertices) {
  std::vector<const Vertex*> members;
  members.reserve(a.members.size() + b.members.size());
  for (VertexId id : a.members) members.push_back(&vertices.at(id));
  for (VertexId id : b.members) members.push_back(&vertices.at(id));
  Cluster merged;
  merged.representative = build_representative(members);
  merged.members = merged.representative.members;
  merged.cid = merged.members.front();
  return merged;
}

}  // namespace

std::string blocking_key(const Representative& r, std::size_t prefix_len) {
  if (r.label.empty()) return kEmptyBlockKey;
  return utf8_prefix(r.label, prefix_len);
}

bool types_compatible(const Representative& a, const Representative& b) {
  if (a.types.empty() || b.types.empty()) return true;
  auto i = a.types.begin();
  auto j = b.types.begin();
  while (i != a.types.end() && j != b.types.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      return true;
    }
  }
  return false;
}

bool sources_mergeable(const Representative& a, const Representative& b, std::size_t max_sources) {
  if (a.sources.size() + b.sources.size() > max_sources) return false;
  for (const auto& s : a.sources) {
    if (b.sources.count(s)) return false;
  }
  return true;
}

std::vector<MergeTriplet> generate_candidates(std::span<const Cluster> clusters, const PipelineConfig& cfg,
                                              const FieldStats* stats, Executor& exec) {
  std::map<std::string, std::vector<std::size_t>> blocks;
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    blocks[blocking_key(clusters[i].representative, cfg.blocking_prefix_len)].push_back(i);
  }
  std::vector<const std::pair<const std::string, std::vector<std::size_t>>*> block_list;
  for (const auto& entry : blocks) block_list.push_back(&entry);

  auto per_block = exec.map(block_list.size(), [&](std::size_t bi) {
    const auto& [key, members] = *block_list[bi];
    std::vector<MergeTriplet> out;
    for (std::size_t x = 0; x < members.size(); ++x) {
      for (std::size_t y = x + 1; y < members.size(); ++y) {
        const Cluster& a = clusters[members[x]];
        const Cluster& b = clusters[members[y]];
        if (!types_compatible(a.representative, b.representative)) continue;
        if (!sources_mergeable(a.representative, b.representative, cfg.max_sources)) continue;
        const double sim = representative_similarity(a.representative, b.representative, cfg, stats);
        if (sim < cfg.merge_min_sim) continue;
        out.push_back({std::min(a.cid, b.cid), std::max(a.cid, b.cid), sim, key});
      }
    }
    std::sort(out.begin(), out.end(), triplet_order);
    return out;
  });
  std::vector<MergeTriplet> workset;
  for (auto& part : per_block) workset.insert(workset.end(), part.begin(), part.end());
  return workset;
}

MergeState MergeState::initial(std::vector<Cluster> clusters, const PipelineConfig& cfg, const FieldStats* stats,
                               Executor& exec) {
  MergeState state;
  state.workset = generate_candidates(clusters, cfg, stats, exec);
  for (auto& c : clusters) {
    std::string block = blocking_key(c.representative, cfg.blocking_prefix_len);
    const ClusterId cid = c.cid;
    auto [it, inserted] = state.solution.emplace(cid, SolutionEntry{std::move(c), true, std::move(block)});
    if (!inserted) throw InvalidInput("duplicate cluster id " + std::to_string(cid));
  }
  return state;
}

std::vector<Cluster> MergeState::active_clusters() const {
  std::vector<Cluster> out;
  for (const auto& [cid, entry] : solution) {
    if (entry.active) out.push_back(entry.cluster);
  }
  return out;
}

MergeState merge_step(MergeState state, const VertexTable& vertices, const PipelineConfig& cfg,
                      const FieldStats* stats, Executor& exec, std::vector<MergeEvent>* events, std::size_t round) {
  if (state.workset.empty()) return state;
  const auto ranges = block_ranges(state.workset);

  struct BlockResult {
    MergeTriplet chosen;
    Cluster merged;
    std::vector<MergeTriplet> next;
  };
  auto results = exec.map(ranges.size(), [&](std::size_t bi) {
    const auto [begin, end] = ranges[bi];
    std::size_t best = begin;
    for (std::size_t i = begin + 1; i < end; ++i) {
      // Triplets are sorted by (cid_a, cid_b), so the first maximum is the tie winner.
      if (state.workset[i].sim > state.workset[best].sim) best = i;
    }
    BlockResult r;
    r.chosen = state.workset[best];
    const ClusterId kept = r.chosen.cid_a;
    const ClusterId absorbed = r.chosen.cid_b;
    r.merged = merge_clusters(state.solution.at(kept).cluster, state.solution.at(absorbed).cluster, vertices);

    for (std::size_t i = begin; i < end; ++i) {
      if (i == best) continue;
      MergeTriplet t = state.workset[i];
      if (t.cid_a == absorbed) t.cid_a = kept;
      if (t.cid_b == absorbed) t.cid_b = kept;
      if (t.cid_a == t.cid_b) continue;
      if (t.cid_a > t.cid_b) std::swap(t.cid_a, t.cid_b);
      if (t.cid_a == kept || t.cid_b == kept) {
        const ClusterId other = t.cid_a == kept ? t.cid_b : t.cid_a;
        const Representative& other_rep = state.solution.at(other).cluster.representative;
        if (!types_compatible(r.merged.representative, other_rep)) continue;
        if (!sources_mergeable(r.merged.representative, other_rep, cfg.max_sources)) continue;
        t.sim = representative_similarity(r.merged.representative, other_rep, cfg, stats);
        if (t.sim < cfg.merge_min_sim) continue;
      }
      r.next.push_back(std::move(t));
    }
    std::sort(r.next.begin(), r.next.end(), triplet_order);
    r.next.erase(std::unique(r.next.begin(), r.next.end(),
                             [](const MergeTriplet& x, const MergeTriplet& y) {
                               return x.cid_a == y.cid_a && x.cid_b == y.cid_b;
                             }),
                 r.next.end());
    return r;
  });

  std::vector<MergeTriplet> next;
  for (auto& r : results) {
    auto& kept = state.solution.at(r.chosen.cid_a);
    kept.cluster = std::move(r.merged);
    state.solution.at(r.chosen.cid_b).active = false;
    if (events) events->push_back({round, r.chosen.block, r.chosen.cid_a, r.chosen.cid_b, r.chosen.sim});
    next.insert(next.end(), std::make_move_iterator(r.next.begin()), std::make_move_iterator(r.next.end()));
  }
  state.workset = std::move(next);
  return state;
}

std::vector<Cluster> merge_loop(std::vector<Cluster> clusters, const VertexTable& vertices, const PipelineConfig& cfg,
                                const FieldStats* stats, Executor& exec, std::vector<MergeEvent>* events) {
  MergeState state = MergeState::initial(std::move(clusters), cfg, stats, exec);
  for (std::size_t round = 0; round < cfg.merge_max_iterations && !state.workset.empty(); ++round) {
    state = merge_step(std::move(state), vertices, cfg, stats, exec, events, round);
  }
  return state.active_clusters();
}

}  // namespace holo
