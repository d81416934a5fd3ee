#include "holo/phases.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <numeric>
#include <unordered_map>

#include "holo/error.hpp"
#include "holo/text.hpp"

namespace holo {
namespace {

// Majority vote; ties prefer the longer value, then the lexicographically smaller one.
std::string majority(const std::vector<std::string_view>& values) {
  std::map<std::string_view, std::size_t> counts;
  for (auto v : values) ++counts[v];
  std::string_view best;
  std::size_t best_count = 0;
  std::size_t best_len = 0;
  for (auto& [value, count] : counts) {
    const std::size_t len = utf8_decode(value).size();
    if (count > best_count || (count == best_count && len > best_len)) {
      best = value;
      best_count = count;
      best_len = len;
    }
  }
  return std::string(best);
}

// Per-vertex adjacency over dense indices.
struct Adjacency {
  struct Entry {
    std::size_t other;
    double sim;
  };
  std::vector<std::vector<Entry>> lists;

  Adjacency(const VertexTable& vertices, std::span<const SimEdge> edges) : lists(vertices.size()) {
    for (const auto& e : edges) {
      const std::size_t a = vertices.index_of(e.src);
      const std::size_t b = vertices.index_of(e.dst);
      lists[a].push_back({b, e.sim});
      lists[b].push_back({a, e.sim});
    }
  }
};

std::size_t find_root(std::vector<std::atomic<std::size_t>>& parent, std::size_t x) {
  for (;;) {
    std::size_t p = parent[x].load(std::memory_order_relaxed);
    if (p == x) return x;
    std::size_t gp = parent[p].load(std::memory_order_relaxed);
    if (gp != p) parent[x].compare_exchange_weak(p, gp, std::memory_order_relaxed);
    x = gp;
  }
}

}  // namespace

Assignment::Assignment(const VertexTable& vertices) {
  ids_.reserve(vertices.size());
  for (const auto& v : vertices) ids_.push_back(v.id);
  cids_ = ids_;
}

ClusterId Assignment::cid_of(VertexId id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) throw InvalidInput("vertex " + std::to_string(id) + " has no cluster assignment");
  return cids_[static_cast<std::size_t>(it - ids_.begin())];
}

std::vector<Assignment::Group> Assignment::groups() const {
  std::vector<std::size_t> order(ids_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cids_[a] < cids_[b]; });
  std::vector<Group> out;
  for (std::size_t idx : order) {
    if (out.empty() || out.back().cid != cids_[idx]) out.push_back({cids_[idx], {}});
    out.back().members.push_back(idx);
  }
  return out;
}

void Assignment::canonicalize() {
  for (auto& g : groups()) {
    const ClusterId cid = ids_[g.members.front()];
    for (std::size_t idx : g.members) cids_[idx] = cid;
  }
}

Assignment connected_components(const Graph& graph, Executor& exec) {
  const auto& table = graph.vertices;
  std::vector<std::atomic<std::size_t>> parent(table.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i].store(i, std::memory_order_relaxed);

  exec.for_each_index(graph.edges.size(), [&](std::size_t i) {
    std::size_t u = table.index_of(graph.edges[i].src);
    std::size_t v = table.index_of(graph.edges[i].dst);
    for (;;) {
      u = find_root(parent, u);
      v = find_root(parent, v);
      if (u == v) return;
      // Hook the larger root below the smaller one, so every root is its component's minimum.
      if (u < v) std::swap(u, v);
      std::size_t expected = u;
      if (parent[u].compare_exchange_strong(expected, v, std::memory_order_acq_rel)) return;
    }
  });

  Assignment out(table);
  exec.for_each_index(table.size(), [&](std::size_t i) { out.set(i, table[find_root(parent, i)].id); });
  return out;
}

std::vector<SimEdge> intra_cluster_edges(const Graph& graph, const Assignment& assignment, const PipelineConfig& cfg,
                                         const FieldStats* stats, Executor& exec) {
  const auto groups = assignment.groups();
  for (const auto& g : groups) {
    if (g.members.size() > cfg.max_component_size) {
      throw InvalidInput("cluster " + std::to_string(g.cid) + " has " + std::to_string(g.members.size()) +
                         " members, above max_component_size " + std::to_string(cfg.max_component_size) +
                         "; raise the input link threshold or max_component_size");
    }
  }
  const auto& table = graph.vertices;
  auto per_group = exec.map(groups.size(), [&](std::size_t gi) {
    const auto& members = groups[gi].members;
    std::vector<SimEdge> edges;
    edges.reserve(members.size() * (members.size() - 1) / 2);
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        const Vertex& a = table[members[i]];
        const Vertex& b = table[members[j]];
        edges.push_back(make_edge(a.id, b.id, vertex_similarity(a, b, cfg, stats)));
      }
    }
    return edges;
  });
  std::vector<SimEdge> out;
  for (auto& part : per_group) out.insert(out.end(), part.begin(), part.end());
  std::sort(out.begin(), out.end(),
            [](const SimEdge& x, const SimEdge& y) { return std::pair(x.src, x.dst) < std::pair(y.src, y.dst); });
  return out;
}

Assignment type_group(const Assignment& assignment, const VertexTable& vertices, Executor& exec) {
  Assignment out = assignment;
  const auto groups = assignment.groups();
  exec.for_each_index(groups.size(), [&](std::size_t gi) {
    const auto& members = groups[gi].members;
    // Local union-find over members sharing a type.
    std::vector<std::size_t> parent(members.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    std::map<std::string_view, std::size_t> first_with_type;
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (const auto& t : vertices[members[i]].types) {
        auto [it, inserted] = first_with_type.emplace(t, i);
        if (!inserted) {
          std::size_t a = find(i);
          std::size_t b = find(it->second);
          if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
      }
    }
    for (std::size_t i = 0; i < members.size(); ++i) {
      const Vertex& v = vertices[members[i]];
      // Members are ascending, so the root (smallest local index) is the smallest id.
      out.set(members[i], v.types.empty() ? v.id : vertices[members[find(i)]].id);
    }
  });
  return out;
}

Assignment assign_untyped(const Assignment& typed, const VertexTable& vertices, std::span<const SimEdge> intra_edges,
                          Executor& exec, std::vector<TypeCandidate>* winners) {
  const Adjacency adj(vertices, intra_edges);
  const std::size_t n = vertices.size();

  struct Choice {
    bool has = false;
    TypeCandidate best{};
  };
  auto choices = exec.map(n, [&](std::size_t i) {
    Choice c;
    if (!vertices[i].types.empty()) return c;
    for (const auto& entry : adj.lists[i]) {
      const Vertex& other = vertices[entry.other];
      if (other.types.empty()) continue;
      const ClusterId cid = typed.cid(entry.other);
      if (!c.has || entry.sim > c.best.sim || (entry.sim == c.best.sim && cid < c.best.cid)) {
        c.has = true;
        c.best = TypeCandidate{vertices[i].id, entry.sim, *other.types.begin(), cid};
      }
    }
    return c;
  });

  Assignment out = typed;
  // Typeless vertices without typed neighbors: group them along typeless edges.
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto orphan = [&](std::size_t i) { return vertices[i].types.empty() && !choices[i].has; };
  for (std::size_t i = 0; i < n; ++i) {
    if (!orphan(i)) continue;
    for (const auto& entry : adj.lists[i]) {
      if (!orphan(entry.other)) continue;
      std::size_t a = find(i);
      std::size_t b = find(entry.other);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!vertices[i].types.empty()) continue;
    if (choices[i].has) {
      out.set(i, choices[i].best.cid);
      if (winners) winners->push_back(choices[i].best);
    } else {
      out.set(i, vertices[find(i)].id);
    }
  }
  out.canonicalize();
  return out;
}

Assignment refine_by_similarity(const Assignment& assignment, const VertexTable& vertices,
                                std::span<const SimEdge> intra_edges, const PipelineConfig& cfg, Executor& exec,
                                std::vector<RefinementStep>* trace) {
  const Adjacency adj(vertices, intra_edges);
  const auto groups = assignment.groups();
  Assignment out = assignment;

  auto steps = exec.map(groups.size(), [&](std::size_t gi) {
    std::vector<RefinementStep> local_steps;
    const auto& members = groups[gi].members;
    const std::size_t n = members.size();
    if (n < 2) return local_steps;

    std::unordered_map<std::size_t, std::size_t> pos;
    for (std::size_t i = 0; i < n; ++i) pos.emplace(members[i], i);
    std::vector<double> sim(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& entry : adj.lists[members[i]]) {
        auto it = pos.find(entry.other);
        if (it != pos.end()) sim[i * n + it->second] = entry.sim;
      }
    }

    std::vector<char> active(n, 1);
    std::size_t active_count = n;
    const std::size_t cap = cfg.refine_max_iterations == 0 ? n : cfg.refine_max_iterations;
    std::size_t threshold_removals = 0;
    std::size_t superstep = 0;
    ClusterId current_cid = groups[gi].cid;

    while (active_count >= 2) {
      ++superstep;
      std::vector<double> asim(n, 0.0);
      std::map<std::string_view, std::size_t> source_count;
      for (std::size_t i = 0; i < n; ++i) {
        if (!active[i]) continue;
        ++source_count[vertices[members[i]].source];
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          if (j != i && active[j]) sum += sim[i * n + j];
        }
        asim[i] = sum / static_cast<double>(active_count - 1);
      }
      const bool duplicate_sources = source_count.size() < active_count;
      const bool conflict = duplicate_sources || active_count > cfg.max_sources;

      std::size_t victim = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (!active[i]) continue;
        if (duplicate_sources && source_count[vertices[members[i]].source] < 2) continue;
        // Later indices carry larger ids, so `<=` prefers the larger id on ties.
        if (victim == n || asim[i] <= asim[victim]) victim = i;
      }
      if (!conflict) {
        if (threshold_removals >= cap || asim[victim] >= cfg.refine_min_asim) break;
        ++threshold_removals;
      }
      active[victim] = 0;
      --active_count;
      local_steps.push_back({current_cid, vertices[members[victim]].id, asim[victim], superstep, conflict});
      out.set(members[victim], vertices[members[victim]].id);
      for (std::size_t i = 0; i < n; ++i) {
        if (active[i]) {
          current_cid = vertices[members[i]].id;
          break;
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (active[i]) out.set(members[i], current_cid);
    }
    return local_steps;
  });

  if (trace) {
    for (auto& s : steps) trace->insert(trace->end(), s.begin(), s.end());
  }
  return out;
}

Representative build_representative(std::span<const Vertex* const> members) {
  Representative r;
  if (members.empty()) throw InvalidInput("representative of an empty cluster");
  std::vector<const Vertex*> sorted(members.begin(), members.end());
  std::sort(sorted.begin(), sorted.end(), [](const Vertex* a, const Vertex* b) { return a->id < b->id; });

  std::vector<std::string_view> labels;
  std::map<std::string_view, std::vector<std::string_view>> property_values;
  double lat = 0.0;
  double lon = 0.0;
  std::size_t located = 0;
  for (const Vertex* v : sorted) {
    r.members.push_back(v->id);
    r.sources.insert(v->source);
    r.types.insert(v->types.begin(), v->types.end());
    labels.push_back(v->normalized_label);
    if (v->coords) {
      lat += v->coords->lat;
      lon += v->coords->lon;
      ++located;
    }
    for (const auto& [key, value] : v->properties) property_values[key].push_back(value);
  }
  r.label = majority(labels);
  if (located > 0) r.coords = GeoPoint{lat / static_cast<double>(located), lon / static_cast<double>(located)};
  for (const auto& [key, values] : property_values) r.properties.emplace(std::string(key), majority(values));
  return r;
}

std::vector<Cluster> build_clusters(const Assignment& assignment, const VertexTable& vertices, Executor& exec) {
  const auto groups = assignment.groups();
  return exec.map(groups.size(), [&](std::size_t gi) {
    std::vector<const Vertex*> members;
    members.reserve(groups[gi].members.size());
    for (std::size_t idx : groups[gi].members) members.push_back(&vertices[idx]);
    Cluster c;
    c.representative = build_representative(members);
    c.members = c.representative.members;
    c.cid = c.members.front();
    return c;
  });
}

}  // namespace holo
