#pragma once

// JSON Lines readers and writers for vertices, edges and clusters; the music
// benchmark CSV reader; the type dictionary loader.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "holo/model.hpp"
#include "holo/preprocess.hpp"

namespace holo::io {

using Path = std::filesystem::path;

nlohmann::json vertex_to_json(const Vertex& v);
Vertex vertex_from_json(const nlohmann::json& j);
nlohmann::json edge_to_json(const SimEdge& e);
nlohmann::json cluster_to_json(const Cluster& c, bool with_representative = true);
nlohmann::json representative_to_json(const Representative& r);

/// `where` names the input in error messages.
std::vector<Vertex> parse_vertices(std::istream& in, const std::string& where = "<vertices>");
std::vector<SimEdge> parse_edges(std::istream& in, const std::string& where = "<edges>");
std::vector<Cluster> parse_clusters(std::istream& in, const std::string& where = "<clusters>");

/// Throws ParseError on a malformed line and InvalidInput on duplicate ids.
std::vector<Vertex> read_vertices(const Path& path);
/// Input order is preserved; missing "sim" reads as 0.
std::vector<SimEdge> read_edges(const Path& path);
/// Cluster files and gold standards share one format; the representative is optional.
std::vector<Cluster> read_gold(const Path& path);

void write_vertices(const Path& path, const std::vector<Vertex>& vertices);
void write_edges(const Path& path, const std::vector<SimEdge>& edges);
/// Clusters are written in the given order, one per line.
void write_clusters(const Path& path, const std::vector<Cluster>& clusters, bool with_representative = true);
void write_clusters(std::ostream& out, const std::vector<Cluster>& clusters, bool with_representative = true);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const Path& path, const std::string& content);

/// Column names of the music benchmark CSV.
struct MusicColumns {
  std::string id = "id";
  std::string cluster_id = "cluster_id";
  std::string source_id = "source_id";
  std::string title = "title";
  std::vector<std::string> properties = {"number", "length", "artist", "album", "year", "language"};
};

struct MusicDataset {
  std::vector<Vertex> vertices;
  std::vector<Cluster> gold;  // from the cluster_id column; cid = smallest member
};

/// Comma-separated, double-quote escaped fields, header row required.
std::vector<std::vector<std::string>> parse_csv(std::istream& in, const std::string& where = "<csv>");
MusicDataset read_music_csv(const Path& path, const MusicColumns& columns = {});

/// `raw<TAB>harmonized` lines; `#` starts a comment.
TypeDictionary parse_type_dictionary(std::istream& in, const std::string& where = "<types>");
TypeDictionary load_type_dictionary(const Path& path);

}  // namespace holo::io
