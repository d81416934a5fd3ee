#include "holo/io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "holo/error.hpp"
#include "holo/text.hpp"

namespace holo::io {
namespace {

using nlohmann::json;

std::ifstream open_input(const Path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const Path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput("cannot write " + path.string());
  return out;
}

// Calls fn(json, line_number) for every non-blank line.
template <class Fn>
void for_each_json_line(std::istream& in, const std::string& where, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(where, line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError(where, line_no, "expected a JSON object");
    try {
      fn(j, line_no);
    } catch (const json::exception& e) {
      throw ParseError(where, line_no, e.what());
    } catch (const InvalidInput& e) {
      throw ParseError(where, line_no, e.what());
    }
  }
}

const json& required(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) throw InvalidInput(std::string("missing required field '") + key + "'");
  return *it;
}

VertexId read_id(const json& j, const char* key) {
  const json& v = required(j, key);
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<long long>() < 0)) {
    throw InvalidInput(std::string("field '") + key + "' must be a non-negative integer");
  }
  return v.get<VertexId>();
}

std::optional<GeoPoint> read_coords(const json& j) {
  const bool has_lat = j.contains("lat") && !j["lat"].is_null();
  const bool has_lon = j.contains("lon") && !j["lon"].is_null();
  if (has_lat != has_lon) throw InvalidInput("lat and lon must be given together");
  if (!has_lat) return std::nullopt;
  if (!j["lat"].is_number() || !j["lon"].is_number()) throw InvalidInput("lat/lon must be numbers");
  GeoPoint p{j["lat"].get<double>(), j["lon"].get<double>()};
  if (!p.valid()) throw InvalidInput("coordinates out of range");
  return p;
}

std::set<std::string> read_string_set(const json& j, const char* key) {
  std::set<std::string> out;
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return out;
  if (!it->is_array()) throw InvalidInput(std::string("field '") + key + "' must be an array of strings");
  for (const auto& item : *it) out.insert(item.get<std::string>());
  return out;
}

PropertyMap read_properties(const json& j) {
  PropertyMap out;
  auto it = j.find("properties");
  if (it == j.end() || it->is_null()) return out;
  if (!it->is_object()) throw InvalidInput("field 'properties' must be an object");
  for (const auto& [key, value] : it->items()) out.emplace(key, value.get<std::string>());
  return out;
}

void put_coords(json& j, const std::optional<GeoPoint>& p) {
  if (!p) return;
  j["lat"] = p->lat;
  j["lon"] = p->lon;
}

}  // namespace

json vertex_to_json(const Vertex& v) {
  json j;
  j["id"] = v.id;
  j["label"] = v.label;
  j["source"] = v.source;
  j["types"] = json::array();
  for (const auto& t : v.types) j["types"].push_back(t);
  put_coords(j, v.coords);
  if (!v.properties.empty()) j["properties"] = v.properties;
  return j;
}

Vertex vertex_from_json(const json& j) {
  const VertexId id = read_id(j, "id");
  std::string label = required(j, "label").get<std::string>();
  std::string source = required(j, "source").get<std::string>();
  if (source.empty()) throw InvalidInput("field 'source' must not be empty");
  return make_vertex(id, std::move(label), std::move(source), read_string_set(j, "types"), read_coords(j),
                     read_properties(j));
}

json edge_to_json(const SimEdge& e) { return json{{"src", e.src}, {"dst", e.dst}, {"sim", e.sim}}; }

json representative_to_json(const Representative& r) {
  json j;
  j["label"] = r.label;
  j["sources"] = r.sources;
  j["types"] = r.types;
  put_coords(j, r.coords);
  if (!r.properties.empty()) j["properties"] = r.properties;
  return j;
}

json cluster_to_json(const Cluster& c, bool with_representative) {
  json j;
  j["cid"] = c.cid;
  j["vertices"] = c.members;
  if (with_representative) j["representative"] = representative_to_json(c.representative);
  return j;
}

std::vector<Vertex> parse_vertices(std::istream& in, const std::string& where) {
  std::vector<Vertex> out;
  std::unordered_set<VertexId> seen;
  for_each_json_line(in, where, [&](const json& j, std::size_t line) {
    Vertex v = vertex_from_json(j);
    if (!seen.insert(v.id).second) throw ParseError(where, line, "duplicate vertex id " + std::to_string(v.id));
    out.push_back(std::move(v));
  });
  return out;
}

std::vector<SimEdge> parse_edges(std::istream& in, const std::string& where) {
  std::vector<SimEdge> out;
  for_each_json_line(in, where, [&](const json& j, std::size_t) {
    SimEdge e{read_id(j, "src"), read_id(j, "dst"), 0.0};
    if (j.contains("sim") && !j["sim"].is_null()) {
      if (!j["sim"].is_number()) throw InvalidInput("field 'sim' must be a number");
      e.sim = j["sim"].get<double>();
      if (e.sim < 0.0 || e.sim > 1.0) throw InvalidInput("field 'sim' must be in [0,1]");
    }
    out.push_back(e);
  });
  return out;
}

std::vector<Cluster> parse_clusters(std::istream& in, const std::string& where) {
  std::vector<Cluster> out;
  std::unordered_set<ClusterId> seen;
  for_each_json_line(in, where, [&](const json& j, std::size_t line) {
    Cluster c;
    c.cid = read_id(j, "cid");
    const json& vs = required(j, "vertices");
    if (!vs.is_array() || vs.empty()) throw InvalidInput("field 'vertices' must be a non-empty array");
    for (const auto& v : vs) {
      if (!v.is_number_integer()) throw InvalidInput("vertex ids must be integers");
      c.members.push_back(v.get<VertexId>());
    }
    std::sort(c.members.begin(), c.members.end());
    if (std::adjacent_find(c.members.begin(), c.members.end()) != c.members.end()) {
      throw InvalidInput("cluster lists a vertex twice");
    }
    c.representative.members = c.members;
    if (j.contains("representative") && !j["representative"].is_null()) {
      const json& r = j["representative"];
      if (!r.is_object()) throw InvalidInput("field 'representative' must be an object");
      c.representative.label = r.value("label", std::string());
      c.representative.sources = read_string_set(r, "sources");
      c.representative.types = read_string_set(r, "types");
      c.representative.coords = read_coords(r);
      c.representative.properties = read_properties(r);
    }
    if (!seen.insert(c.cid).second) throw ParseError(where, line, "duplicate cluster id " + std::to_string(c.cid));
    out.push_back(std::move(c));
  });
  return out;
}

std::vector<Vertex> read_vertices(const Path& path) {
  auto in = open_input(path);
  return parse_vertices(in, path.string());
}

std::vector<SimEdge> read_edges(const Path& path) {
  auto in = open_input(path);
  return parse_edges(in, path.string());
}

std::vector<Cluster> read_gold(const Path& path) {
  auto in = open_input(path);
  return parse_clusters(in, path.string());
}

void write_vertices(const Path& path, const std::vector<Vertex>& vertices) {
  auto out = open_output(path);
  for (const auto& v : vertices) out << vertex_to_json(v).dump() << '\n';
}

void write_edges(const Path& path, const std::vector<SimEdge>& edges) {
  auto out = open_output(path);
  for (const auto& e : edges) out << edge_to_json(e).dump() << '\n';
}

void write_clusters(std::ostream& out, const std::vector<Cluster>& clusters, bool with_representative) {
  for (const auto& c : clusters) out << cluster_to_json(c, with_representative).dump() << '\n';
}

void write_clusters(const Path& path, const std::vector<Cluster>& clusters, bool with_representative) {
  auto out = open_output(path);
  write_clusters(out, clusters, with_representative);
}

void write_file_atomic(const Path& path, const std::string& content) {
  Path tmp = path;
  tmp += ".tmp";
  {
    auto out = open_output(tmp);
    out << content;
    out.flush();
    if (!out) throw InvalidInput("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::vector<std::vector<std::string>> parse_csv(std::istream& in, const std::string& where) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t line = 1;
  std::size_t row_line = 1;
  char c;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
    row.clear();
  };
  while (in.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      if (field_started && !field.empty()) throw ParseError(where, line, "quote inside an unquoted field");
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\r') {
      continue;
    } else if (c == '\n') {
      end_row();
      row_line = ++line;
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (quoted) throw ParseError(where, row_line, "unterminated quoted field");
  if (field_started || !row.empty()) end_row();
  return rows;
}

MusicDataset read_music_csv(const Path& path, const MusicColumns& columns) {
  auto in = open_input(path);
  const std::string where = path.string();
  auto rows = parse_csv(in, where);
  if (rows.empty()) return {};
  const auto& header = rows.front();
  auto column = [&](const std::string& name, bool needed) -> std::optional<std::size_t> {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      if (needed) throw ParseError(where, 1, "missing column '" + name + "'");
      return std::nullopt;
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t id_col = *column(columns.id, true);
  const std::size_t cluster_col = *column(columns.cluster_id, true);
  const std::size_t source_col = *column(columns.source_id, true);
  const std::size_t title_col = *column(columns.title, true);
  std::vector<std::pair<std::string, std::size_t>> property_cols;
  for (const auto& p : columns.properties) {
    if (auto c = column(p, false)) property_cols.emplace_back(p, *c);
  }

  MusicDataset data;
  std::map<std::string, std::vector<VertexId>> clusters;
  std::unordered_set<VertexId> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::size_t line = r + 1;
    if (row.size() != header.size()) throw ParseError(where, line, "expected " + std::to_string(header.size()) + " fields");
    VertexId id;
    try {
      std::size_t used = 0;
      id = std::stoull(row[id_col], &used);
      if (used != row[id_col].size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw ParseError(where, line, "invalid id '" + row[id_col] + "'");
    }
    if (!seen.insert(id).second) throw ParseError(where, line, "duplicate vertex id " + std::to_string(id));
    if (row[source_col].empty()) throw ParseError(where, line, "empty source");
    PropertyMap props;
    for (const auto& [name, col] : property_cols) {
      if (!row[col].empty()) props.emplace(name, row[col]);
    }
    data.vertices.push_back(make_vertex(id, row[title_col], row[source_col], {}, std::nullopt, std::move(props)));
    clusters[row[cluster_col]].push_back(id);
  }
  for (auto& [key, ids] : clusters) {
    std::sort(ids.begin(), ids.end());
    Cluster c;
    c.cid = ids.front();
    c.members = ids;
    c.representative.members = ids;
    data.gold.push_back(std::move(c));
  }
  std::sort(data.gold.begin(), data.gold.end(), [](const Cluster& a, const Cluster& b) { return a.cid < b.cid; });
  return data;
}

TypeDictionary parse_type_dictionary(std::istream& in, const std::string& where) {
  TypeDictionary dict;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view body = line;
    if (auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    if (trim(body).empty()) continue;
    auto tab = body.find('\t');
    if (tab == std::string_view::npos) throw ParseError(where, line_no, "expected raw_type<TAB>harmonized_type");
    auto raw = trim(body.substr(0, tab));
    auto harmonized = trim(body.substr(tab + 1));
    if (raw.empty() || harmonized.empty() || harmonized.find('\t') != std::string_view::npos) {
      throw ParseError(where, line_no, "expected raw_type<TAB>harmonized_type");
    }
    if (dict.contains(raw)) throw ParseError(where, line_no, "duplicate type '" + std::string(raw) + "'");
    dict.add(raw, harmonized);
  }
  return dict;
}

TypeDictionary load_type_dictionary(const Path& path) {
  auto in = open_input(path);
  return parse_type_dictionary(in, path.string());
}

}  // namespace holo::io
