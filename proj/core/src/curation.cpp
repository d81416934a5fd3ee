#include "holo/curation.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>

#include "holo/io.hpp"
#include "holo/phases.hpp"
#include "holo/text.hpp"

namespace holo {
namespace {

using nlohmann::json;

// The JSON parser marks literals as unsigned, builders often produce signed ints.
bool is_id(const json& v) { return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0); }

VertexId read_uint(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw DecisionError(400, std::string("missing field '") + key + "'");
  if (!is_id(*it)) throw DecisionError(400, std::string("field '") + key + "' must be a vertex id");
  return it->get<VertexId>();
}

std::vector<VertexId> read_id_list(const json& j, const char* what) {
  if (!j.is_array()) throw DecisionError(400, std::string(what) + " must be an array of ids");
  std::vector<VertexId> out;
  for (const auto& v : j) {
    if (!is_id(v)) throw DecisionError(400, std::string(what) + " must contain vertex ids");
    out.push_back(v.get<VertexId>());
  }
  return out;
}

}  // namespace

std::string to_string(DecisionKind kind) {
  switch (kind) {
    case DecisionKind::Approve:
      return "approve";
    case DecisionKind::DeleteCluster:
      return "delete-cluster";
    case DecisionKind::RemoveVertex:
      return "remove-vertex";
    case DecisionKind::Split:
      return "split";
    case DecisionKind::Merge:
      return "merge";
  }
  return "unknown";
}

std::string to_string(ReviewStatus status) {
  switch (status) {
    case ReviewStatus::Unreviewed:
      return "unreviewed";
    case ReviewStatus::Approved:
      return "approved";
    case ReviewStatus::Edited:
      return "edited";
  }
  return "unknown";
}

Decision Decision::from_json(const json& j) {
  if (!j.is_object()) throw DecisionError(400, "decision must be a JSON object");
  auto kind_it = j.find("kind");
  if (kind_it == j.end() || !kind_it->is_string()) throw DecisionError(400, "missing field 'kind'");
  const std::string kind = kind_it->get<std::string>();
  Decision d;
  if (kind == "approve") {
    d.kind = DecisionKind::Approve;
    d.cid = read_uint(j, "cid");
  } else if (kind == "delete-cluster") {
    d.kind = DecisionKind::DeleteCluster;
    d.cid = read_uint(j, "cid");
  } else if (kind == "remove-vertex") {
    d.kind = DecisionKind::RemoveVertex;
    d.cid = read_uint(j, "cid");
    d.vertex = read_uint(j, "vertex");
  } else if (kind == "split") {
    d.kind = DecisionKind::Split;
    d.cid = read_uint(j, "cid");
    auto parts = j.find("parts");
    if (parts == j.end() || !parts->is_array()) throw DecisionError(400, "split needs 'parts', a list of id lists");
    for (const auto& part : *parts) d.parts.push_back(read_id_list(part, "each part"));
  } else if (kind == "merge") {
    d.kind = DecisionKind::Merge;
    auto cids = j.find("cids");
    if (cids == j.end()) throw DecisionError(400, "merge needs 'cids', a pair of cluster ids");
    auto ids = read_id_list(*cids, "'cids'");
    if (ids.size() != 2) throw DecisionError(400, "merge needs exactly two cluster ids");
    d.pair = {ids[0], ids[1]};
  } else {
    throw DecisionError(400, "unknown decision kind '" + kind + "'");
  }
  return d;
}

json Decision::to_json() const {
  json j{{"kind", holo::to_string(kind)}};
  switch (kind) {
    case DecisionKind::Approve:
    case DecisionKind::DeleteCluster:
      j["cid"] = cid;
      break;
    case DecisionKind::RemoveVertex:
      j["cid"] = cid;
      j["vertex"] = vertex;
      break;
    case DecisionKind::Split:
      j["cid"] = cid;
      j["parts"] = parts;
      break;
    case DecisionKind::Merge:
      j["cids"] = {pair.first, pair.second};
      break;
  }
  return j;
}

CurationState::CurationState(std::vector<Cluster> clusters, std::vector<std::string> raw_lines,
                             std::vector<Vertex> vertices, std::vector<SimEdge> links)
    : vertices_(std::move(vertices)), links_(canonicalize(std::move(links))) {
  if (!raw_lines.empty() && raw_lines.size() != clusters.size()) {
    throw InvalidInput("raw line count does not match the cluster count");
  }
  derive_links(clusters);  // rejects overlapping clusters
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    Entry e;
    e.cluster = std::move(clusters[i]);
    if (!raw_lines.empty()) e.raw = std::move(raw_lines[i]);
    const ClusterId cid = e.cluster.cid;
    order_.push_back(cid);
    if (!entries_.emplace(cid, std::move(e)).second) throw InvalidInput("duplicate cluster id " + std::to_string(cid));
  }
  for (std::size_t i = 0; i < links_.size(); ++i) {
    incident_[links_[i].src].push_back(i);
    incident_[links_[i].dst].push_back(i);
  }
}

CurationState CurationState::load(const std::filesystem::path& clusters,
                                  const std::optional<std::filesystem::path>& vertices,
                                  const std::optional<std::filesystem::path>& links) {
  std::ifstream in(clusters, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + clusters.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();

  std::vector<std::string> raw;
  std::istringstream lines(content);
  for (std::string line; std::getline(lines, line);) {
    if (!trim(line).empty()) raw.push_back(line);
  }
  std::istringstream parse_in(content);
  auto parsed = io::parse_clusters(parse_in, clusters.string());
  std::vector<Vertex> vs = vertices ? io::read_vertices(*vertices) : std::vector<Vertex>{};
  std::vector<SimEdge> ls = links ? io::read_edges(*links) : std::vector<SimEdge>{};
  return CurationState(std::move(parsed), std::move(raw), std::move(vs), std::move(ls));
}

std::set<SourceId> CurationState::sources_of(const Cluster& c) const {
  std::set<SourceId> out;
  bool complete = true;
  for (VertexId id : c.members) {
    if (vertices_.contains(id)) {
      out.insert(vertices_.at(id).source);
    } else {
      complete = false;
    }
  }
  if (!complete) out.insert(c.representative.sources.begin(), c.representative.sources.end());
  return out;
}

Cluster CurationState::make_cluster(std::vector<VertexId> members, const std::optional<Representative>& fallback) const {
  std::sort(members.begin(), members.end());
  Cluster c;
  c.cid = members.front();
  c.members = members;
  const bool known = std::all_of(members.begin(), members.end(), [&](VertexId id) { return vertices_.contains(id); });
  if (known) {
    std::vector<const Vertex*> ptrs;
    for (VertexId id : members) ptrs.push_back(&vertices_.at(id));
    c.representative = build_representative(ptrs);
  } else if (fallback) {
    c.representative = *fallback;
  }
  c.representative.members = members;
  return c;
}

std::vector<ClusterId> CurationState::apply(const Decision& d) {
  auto require = [&](ClusterId cid) -> Entry& {
    auto it = entries_.find(cid);
    if (it == entries_.end()) throw DecisionError(404, "no cluster with id " + std::to_string(cid));
    return it->second;
  };
  auto known_representatives = [&](const std::vector<VertexId>& members) {
    return std::all_of(members.begin(), members.end(), [&](VertexId id) { return vertices_.contains(id); });
  };
  // Replaces the clusters `removed` by `added` at the position of the first removed one.
  auto replace = [&](const std::vector<ClusterId>& removed, std::vector<Cluster> added) {
    for (const auto& c : added) {
      if (entries_.count(c.cid) && std::find(removed.begin(), removed.end(), c.cid) == removed.end()) {
        throw DecisionError(409, "cluster id " + std::to_string(c.cid) + " already exists");
      }
    }
    std::sort(added.begin(), added.end(), [](const Cluster& a, const Cluster& b) { return a.cid < b.cid; });
    auto first = std::find_if(order_.begin(), order_.end(), [&](ClusterId cid) {
      return std::find(removed.begin(), removed.end(), cid) != removed.end();
    });
    const auto pos = static_cast<std::size_t>(first - order_.begin());
    std::vector<ClusterId> next_order(order_.begin(), order_.begin() + static_cast<std::ptrdiff_t>(pos));
    std::vector<ClusterId> created;
    for (const auto& c : added) created.push_back(c.cid);
    next_order.insert(next_order.end(), created.begin(), created.end());
    for (std::size_t i = pos; i < order_.size(); ++i) {
      if (std::find(removed.begin(), removed.end(), order_[i]) == removed.end()) next_order.push_back(order_[i]);
    }
    for (ClusterId cid : removed) entries_.erase(cid);
    for (auto& c : added) {
      Entry e;
      e.with_representative = known_representatives(c.members) || !c.representative.sources.empty();
      e.status = ReviewStatus::Edited;
      e.cluster = std::move(c);
      const ClusterId cid = e.cluster.cid;
      entries_.emplace(cid, std::move(e));
    }
    order_ = std::move(next_order);
    return created;
  };

  std::vector<ClusterId> result;
  switch (d.kind) {
    case DecisionKind::Approve: {
      Entry& e = require(d.cid);
      if (e.status == ReviewStatus::Unreviewed) e.status = ReviewStatus::Approved;
      result = {d.cid};
      break;
    }
    case DecisionKind::DeleteCluster: {
      require(d.cid);
      entries_.erase(d.cid);
      order_.erase(std::find(order_.begin(), order_.end(), d.cid));
      break;
    }
    case DecisionKind::RemoveVertex: {
      const Entry& e = require(d.cid);
      const auto& members = e.cluster.members;
      if (!std::binary_search(members.begin(), members.end(), d.vertex)) {
        throw DecisionError(400, "vertex " + std::to_string(d.vertex) + " is not in cluster " + std::to_string(d.cid));
      }
      if (members.size() < 2) throw DecisionError(400, "cannot remove the only member of a cluster");
      std::vector<VertexId> rest;
      for (VertexId id : members) {
        if (id != d.vertex) rest.push_back(id);
      }
      std::vector<Cluster> added;
      added.push_back(make_cluster(std::move(rest), std::nullopt));
      added.push_back(make_cluster({d.vertex}, std::nullopt));
      result = replace({d.cid}, std::move(added));
      break;
    }
    case DecisionKind::Split: {
      const Entry& e = require(d.cid);
      if (d.parts.size() < 2) throw DecisionError(400, "split needs at least two parts");
      std::vector<VertexId> covered;
      for (const auto& part : d.parts) {
        if (part.empty()) throw DecisionError(400, "split parts must not be empty");
        covered.insert(covered.end(), part.begin(), part.end());
      }
      std::sort(covered.begin(), covered.end());
      if (covered != e.cluster.members) {
        throw DecisionError(400, "split parts must cover every member of cluster " + std::to_string(d.cid) +
                                     " exactly once");
      }
      std::vector<Cluster> added;
      for (const auto& part : d.parts) added.push_back(make_cluster(part, std::nullopt));
      result = replace({d.cid}, std::move(added));
      break;
    }
    case DecisionKind::Merge: {
      const auto [a, b] = d.pair;
      if (a == b) throw DecisionError(400, "merge needs two distinct clusters");
      const Entry& ea = require(a);
      const Entry& eb = require(b);
      const auto sa = sources_of(ea.cluster);
      const auto sb = sources_of(eb.cluster);
      for (const auto& s : sa) {
        if (sb.count(s)) throw DecisionError(409, "clusters " + std::to_string(a) + " and " + std::to_string(b) +
                                                      " both contain source '" + s + "'");
      }
      std::vector<VertexId> members = ea.cluster.members;
      members.insert(members.end(), eb.cluster.members.begin(), eb.cluster.members.end());
      std::optional<Representative> fallback;
      if (!sa.empty() || !sb.empty()) {
        Representative r = ea.cluster.representative;
        r.sources = sa;
        r.sources.insert(sb.begin(), sb.end());
        r.types.insert(eb.cluster.representative.types.begin(), eb.cluster.representative.types.end());
        fallback = std::move(r);
      }
      std::vector<Cluster> added;
      added.push_back(make_cluster(std::move(members), fallback));
      result = replace({a, b}, std::move(added));
      break;
    }
  }
  log_.push_back(d);
  return result;
}

std::vector<const CurationState::Entry*> CurationState::entries() const {
  std::vector<const Entry*> out;
  out.reserve(order_.size());
  for (ClusterId cid : order_) out.push_back(&entries_.at(cid));
  return out;
}

const CurationState::Entry* CurationState::find(ClusterId cid) const {
  auto it = entries_.find(cid);
  return it == entries_.end() ? nullptr : &it->second;
}

std::string CurationState::export_jsonl() const {
  std::string out;
  for (const Entry* e : entries()) {
    if (e->raw) {
      out += *e->raw;
    } else {
      out += io::cluster_to_json(e->cluster, e->with_representative).dump();
    }
    out += '\n';
  }
  return out;
}

json CurationState::summary(const Entry& e) const {
  const Cluster& c = e.cluster;
  json j{{"cid", c.cid},
         {"size", c.members.size()},
         {"vertices", c.members},
         {"label", c.representative.label},
         {"sources", sources_of(c)},
         {"types", c.representative.types},
         {"status", to_string(e.status)}};
  if (c.representative.coords) {
    j["lat"] = c.representative.coords->lat;
    j["lon"] = c.representative.coords->lon;
  }
  return j;
}

json CurationState::detail(const Entry& e) const {
  json j = summary(e);
  j["representative"] = io::representative_to_json(e.cluster.representative);
  json members = json::array();
  std::set<std::size_t> link_ids;
  for (VertexId id : e.cluster.members) {
    members.push_back(vertices_.contains(id) ? io::vertex_to_json(vertices_.at(id)) : json{{"id", id}});
    if (auto it = incident_.find(id); it != incident_.end()) link_ids.insert(it->second.begin(), it->second.end());
  }
  j["members"] = std::move(members);
  json links = json::array();
  const auto& m = e.cluster.members;
  for (std::size_t i : link_ids) {
    const SimEdge& l = links_[i];
    const bool inside = std::binary_search(m.begin(), m.end(), l.src) && std::binary_search(m.begin(), m.end(), l.dst);
    links.push_back({{"src", l.src}, {"dst", l.dst}, {"sim", l.sim}, {"intra", inside}});
  }
  j["links"] = std::move(links);
  return j;
}

json CurationState::meta() const {
  std::set<SourceId> sources;
  std::map<std::string, std::size_t> status_counts{{"unreviewed", 0}, {"approved", 0}, {"edited", 0}};
  std::size_t members = 0;
  for (const Entry* e : entries()) {
    auto s = sources_of(e->cluster);
    sources.insert(s.begin(), s.end());
    ++status_counts[to_string(e->status)];
    members += e->cluster.members.size();
  }
  json j{{"clusters", order_.size()},
         {"clustered_vertices", members},
         {"vertices", vertices_.size()},
         {"links", links_.size()},
         {"decisions", log_.size()},
         {"sources", sources},
         {"status", status_counts}};
  double min_lat = std::numeric_limits<double>::infinity(), max_lat = -min_lat;
  double min_lon = min_lat, max_lon = -min_lat;
  bool any = false;
  for (const Vertex& v : vertices_) {
    if (!v.coords) continue;
    any = true;
    min_lat = std::min(min_lat, v.coords->lat);
    max_lat = std::max(max_lat, v.coords->lat);
    min_lon = std::min(min_lon, v.coords->lon);
    max_lon = std::max(max_lon, v.coords->lon);
  }
  j["bbox"] = any ? json{{"min_lat", min_lat}, {"min_lon", min_lon}, {"max_lat", max_lat}, {"max_lon", max_lon}}
                  : json(nullptr);
  return j;
}

std::size_t DecisionLog::replay(CurationState& state) const {
  std::ifstream in(path_);
  if (!in) return 0;
  std::size_t applied = 0;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      state.apply(Decision::from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw ParseError(path_.string(), line_no, e.what());
    } catch (const DecisionError& e) {
      throw ParseError(path_.string(), line_no, std::string("logged decision rejected: ") + e.what());
    }
    ++applied;
  }
  return applied;
}

void DecisionLog::append(const Decision& decision) const {
  std::ofstream out(path_, std::ios::app | std::ios::binary);
  if (!out) throw InvalidInput("cannot append to " + path_.string());
  out << decision.to_json().dump() << '\n';
  out.flush();
  if (!out) throw InvalidInput("failed writing " + path_.string());
}

}  // namespace holo
