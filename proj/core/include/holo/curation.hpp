#pragma once

// State machine behind the gold-standard review service: clusters under
// review, decisions applied to them, an append-only decision log and export.

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "holo/error.hpp"
#include "holo/model.hpp"

namespace holo {

enum class DecisionKind { Approve, DeleteCluster, RemoveVertex, Split, Merge };

std::string to_string(DecisionKind kind);

struct Decision {
  DecisionKind kind = DecisionKind::Approve;
  ClusterId cid = 0;                         // approve, delete-cluster, remove-vertex, split
  VertexId vertex = 0;                       // remove-vertex
  std::vector<std::vector<VertexId>> parts;  // split
  std::pair<ClusterId, ClusterId> pair{};    // merge

  /// Throws DecisionError (status 400) on a malformed object.
  static Decision from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

/// A rejected decision; `status` is the HTTP status to report.
class DecisionError : public Error {
 public:
  DecisionError(int status, const std::string& what) : Error(what), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

enum class ReviewStatus { Unreviewed, Approved, Edited };

std::string to_string(ReviewStatus status);

class CurationState {
 public:
  /// `raw_lines` holds the original JSON line of each cluster; untouched
  /// clusters are exported verbatim. Pass an empty vector to serialize all.
  CurationState(std::vector<Cluster> clusters, std::vector<std::string> raw_lines, std::vector<Vertex> vertices = {},
                std::vector<SimEdge> links = {});

  /// Parses a cluster file while keeping its lines for verbatim export.
  static CurationState load(const std::filesystem::path& clusters, const std::optional<std::filesystem::path>& vertices,
                            const std::optional<std::filesystem::path>& links);

  /// Applies a decision or throws DecisionError leaving the state unchanged.
  /// Returns the ids of the clusters the decision produced.
  std::vector<ClusterId> apply(const Decision& decision);

  struct Entry {
    Cluster cluster;
    ReviewStatus status = ReviewStatus::Unreviewed;
    std::optional<std::string> raw;  // original line while untouched
    bool with_representative = true;
  };

  /// Current clusters in export order.
  std::vector<const Entry*> entries() const;
  const Entry* find(ClusterId cid) const;
  const std::vector<Decision>& decisions() const noexcept { return log_; }
  const VertexTable& vertices() const noexcept { return vertices_; }
  const std::vector<SimEdge>& links() const noexcept { return links_; }

  /// Cluster JSON Lines reflecting every applied decision.
  std::string export_jsonl() const;

  nlohmann::json summary(const Entry& e) const;
  nlohmann::json detail(const Entry& e) const;
  nlohmann::json meta() const;

 private:
  Cluster make_cluster(std::vector<VertexId> members, const std::optional<Representative>& fallback) const;
  std::set<SourceId> sources_of(const Cluster& c) const;

  std::vector<ClusterId> order_;  // export order
  std::map<ClusterId, Entry> entries_;
  std::vector<Decision> log_;
  VertexTable vertices_;
  std::vector<SimEdge> links_;
  std::map<VertexId, std::vector<std::size_t>> incident_;  // vertex -> link indices
};

/// Append-only decision log, one JSON object per line.
class DecisionLog {
 public:
  explicit DecisionLog(std::filesystem::path path) : path_(std::move(path)) {}

  /// Applies every logged decision to `state`; throws when one is rejected.
  std::size_t replay(CurationState& state) const;
  void append(const Decision& decision) const;

 private:
  std::filesystem::path path_;
};

}  // namespace holo
