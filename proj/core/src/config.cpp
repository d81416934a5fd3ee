#include "holo/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "holo/error.hpp"
#include "holo/text.hpp"

namespace holo {
namespace {

std::size_t parse_count(const std::string& key, std::string_view text) {
  std::size_t value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return value;
}

double parse_real(const std::string& key, std::string_view text) {
  std::string s(text);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ConfigError(key + ": expected a number, got '" + s + "'");
  return value;
}

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

using Setter = std::function<void(PipelineConfig&, const std::string& key, std::string_view value)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"k", [](auto& c, auto& k, auto v) { c.max_sources = parse_count(k, v); }},
      {"refine_min_asim", [](auto& c, auto& k, auto v) { c.refine_min_asim = parse_real(k, v); }},
      {"merge_min_sim", [](auto& c, auto& k, auto v) { c.merge_min_sim = parse_real(k, v); }},
      {"blocking_prefix_len", [](auto& c, auto& k, auto v) { c.blocking_prefix_len = parse_count(k, v); }},
      {"geo_max_km", [](auto& c, auto& k, auto v) { c.geo_max_km = parse_real(k, v); }},
      {"similarity_profile",
       [](auto& c, auto&, auto v) {
         try {
           c.similarity_profile = parse_similarity_profile(std::string(v));
         } catch (const Error& e) {
           throw ConfigError(e.what());
         }
       }},
      {"weight_title", [](auto& c, auto& k, auto v) { c.weights.title = parse_real(k, v); }},
      {"weight_artist", [](auto& c, auto& k, auto v) { c.weights.artist = parse_real(k, v); }},
      {"weight_album", [](auto& c, auto& k, auto v) { c.weights.album = parse_real(k, v); }},
      {"soft_tfidf_threshold", [](auto& c, auto& k, auto v) { c.soft_tfidf_threshold = parse_real(k, v); }},
      {"refine_max_iterations", [](auto& c, auto& k, auto v) { c.refine_max_iterations = parse_count(k, v); }},
      {"merge_max_iterations", [](auto& c, auto& k, auto v) { c.merge_max_iterations = parse_count(k, v); }},
      {"max_component_size", [](auto& c, auto& k, auto v) { c.max_component_size = parse_count(k, v); }},
      {"parallelism", [](auto& c, auto& k, auto v) { c.parallelism = parse_count(k, v); }},
  };
  return table;
}

}  // namespace

PipelineConfig parse_config(std::istream& in, PipelineConfig base, const std::string& where) {
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::string_view body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key(trim(body.substr(0, eq)));
    const std::string_view value = trim(body.substr(eq + 1));
    auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(where + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError(where + ":" + std::to_string(lineno) + ": repeated key '" + key + "'");
    try {
      it->second(base, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  base.validate();
  return base;
}

PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config(in, std::move(base), path.string());
}

std::string format_config(const PipelineConfig& cfg) {
  std::ostringstream out;
  out << "k = " << cfg.max_sources << '\n'
      << "refine_min_asim = " << format_real(cfg.refine_min_asim) << '\n'
      << "merge_min_sim = " << format_real(cfg.merge_min_sim) << '\n'
      << "blocking_prefix_len = " << cfg.blocking_prefix_len << '\n'
      << "geo_max_km = " << format_real(cfg.geo_max_km) << '\n'
      << "similarity_profile = " << to_string(cfg.similarity_profile) << '\n'
      << "weight_title = " << format_real(cfg.weights.title) << '\n'
      << "weight_artist = " << format_real(cfg.weights.artist) << '\n'
      << "weight_album = " << format_real(cfg.weights.album) << '\n'
      << "soft_tfidf_threshold = " << format_real(cfg.soft_tfidf_threshold) << '\n'
      << "refine_max_iterations = " << cfg.refine_max_iterations << '\n'
      << "merge_max_iterations = " << cfg.merge_max_iterations << '\n'
      << "max_component_size = " << cfg.max_component_size << '\n'
      << "parallelism = " << cfg.parallelism << '\n';
  return out.str();
}

}  // namespace holo
