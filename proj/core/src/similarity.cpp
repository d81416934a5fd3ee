#include "holo/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "holo/preprocess.hpp"
#include "holo/text.hpp"

namespace holo {
namespace {

double jaro(const std::u32string& a, const std::u32string& b) {
  const std::size_t la = a.size();
  const std::size_t lb = b.size();
  if (la == 0 || lb == 0) return 0.0;
  const std::size_t longest = std::max(la, lb);
  const std::size_t window = longest / 2 >= 1 ? longest / 2 - 1 : 0;

  std::vector<char> matched_a(la, 0);
  std::vector<char> matched_b(lb, 0);
  std::size_t matches = 0;
  for (std::size_t i = 0; i < la; ++i) {
    const std::size_t lo = i > window ? i - window : 0;
    const std::size_t hi = std::min(lb, i + window + 1);
    for (std::size_t j = lo; j < hi; ++j) {
      if (!matched_b[j] && a[i] == b[j]) {
        matched_a[i] = matched_b[j] = 1;
        ++matches;
        break;
      }
    }
  }
  if (matches == 0) return 0.0;

  std::size_t out_of_order = 0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < la; ++i) {
    if (!matched_a[i]) continue;
    while (!matched_b[j]) ++j;
    if (a[i] != b[j]) ++out_of_order;
    ++j;
  }
  const double m = static_cast<double>(matches);
  const double t = static_cast<double>(out_of_order) / 2.0;
  return (m / static_cast<double>(la) + m / static_cast<double>(lb) + (m - t) / m) / 3.0;
}

struct TokenVector {
  std::vector<std::string> tokens;  // distinct, sorted
  std::vector<double> weights;      // unit L2 norm
};

TokenVector weigh(std::string_view text, const IdfStats& stats) {
  auto raw = split_whitespace(normalize_label(text));
  std::sort(raw.begin(), raw.end());
  TokenVector tv;
  std::vector<double> tf;
  for (auto& token : raw) {
    if (!tv.tokens.empty() && tv.tokens.back() == token) {
      tf.back() += 1.0;
    } else {
      tv.tokens.push_back(std::move(token));
      tf.push_back(1.0);
    }
  }
  tv.weights.resize(tf.size());
  double norm = 0.0;
  for (std::size_t i = 0; i < tf.size(); ++i) {
    tv.weights[i] = tf[i] * stats.weight(tv.tokens[i]);
    norm += tv.weights[i] * tv.weights[i];
  }
  if (norm <= 0.0) {
    // Every token is corpus-wide: fall back to plain term frequencies.
    tv.weights = tf;
    norm = 0.0;
    for (double w : tv.weights) norm += w * w;
  }
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (double& w : tv.weights) w /= norm;
  }
  return tv;
}

// Maximum-weight assignment on a rows x cols matrix (rows <= cols) of
// non-negative weights. Hungarian method on negated costs.
double max_assignment(const std::vector<std::vector<double>>& weight, std::size_t rows, std::size_t cols) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(rows + 1, 0.0), v(cols + 1, 0.0);
  std::vector<std::size_t> p(cols + 1, 0), way(cols + 1, 0);
  for (std::size_t i = 1; i <= rows; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(cols + 1, inf);
    std::vector<char> used(cols + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= cols; ++j) {
        if (used[j]) continue;
        const double cur = -weight[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= cols; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  double total = 0.0;
  for (std::size_t j = 1; j <= cols; ++j) {
    if (p[j] != 0) total += weight[p[j] - 1][j - 1];
  }
  return total;
}

const std::string* property(const PropertyMap& props, const char* key) {
  auto it = props.find(key);
  if (it == props.end() || it->second.empty()) return nullptr;
  return &it->second;
}

// Fields shared by vertices and representatives.
struct Profiled {
  std::string_view label;
  const std::optional<GeoPoint>& coords;
  const PropertyMap& properties;
};

double profile_similarity(const Profiled& a, const Profiled& b, const PipelineConfig& cfg, const FieldStats* stats) {
  switch (cfg.similarity_profile) {
    case SimilarityProfile::LabelOnly:
      return jaro_winkler(a.label, b.label);
    case SimilarityProfile::LabelGeo: {
      const double label = jaro_winkler(a.label, b.label);
      if (!a.coords || !b.coords) return label;
      return (label + geo_similarity(*a.coords, *b.coords, cfg.geo_max_km)) / 2.0;
    }
    case SimilarityProfile::MusicWeighted: {
      static const FieldStats kUniform;
      const FieldStats& fs = stats ? *stats : kUniform;
      double weighted = 0.0;
      double weight_sum = 0.0;
      if (!a.label.empty() && !b.label.empty()) {
        weighted += cfg.weights.title * soft_tfidf(a.label, b.label, fs.title, cfg.soft_tfidf_threshold);
        weight_sum += cfg.weights.title;
      }
      const std::string* artist_a = property(a.properties, "artist");
      const std::string* artist_b = property(b.properties, "artist");
      if (artist_a && artist_b) {
        weighted += cfg.weights.artist * soft_tfidf(*artist_a, *artist_b, fs.artist, cfg.soft_tfidf_threshold);
        weight_sum += cfg.weights.artist;
      }
      const std::string* album_a = property(a.properties, "album");
      const std::string* album_b = property(b.properties, "album");
      if (album_a && album_b) {
        weighted += cfg.weights.album * soft_tfidf(*album_a, *album_b, fs.album, cfg.soft_tfidf_threshold);
        weight_sum += cfg.weights.album;
      }
      if (weight_sum <= 0.0) return 0.0;
      return std::clamp(weighted / weight_sum, 0.0, 1.0);
    }
  }
  return 0.0;
}

}  // namespace

double jaro_winkler(std::string_view a, std::string_view b) {
  if (a == b) return 1.0;
  const std::u32string ua = utf8_decode(a);
  const std::u32string ub = utf8_decode(b);
  const double j = jaro(ua, ub);
  std::size_t prefix = 0;
  const std::size_t limit = std::min<std::size_t>({4, ua.size(), ub.size()});
  while (prefix < limit && ua[prefix] == ub[prefix]) ++prefix;
  return std::clamp(j + static_cast<double>(prefix) * 0.1 * (1.0 - j), 0.0, 1.0);
}

double haversine_km(GeoPoint p, GeoPoint q) {
  constexpr double kDeg = std::numbers::pi / 180.0;
  const double phi1 = p.lat * kDeg;
  const double phi2 = q.lat * kDeg;
  const double dphi = (q.lat - p.lat) * kDeg;
  const double dlambda = (q.lon - p.lon) * kDeg;
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  const double h = std::clamp(s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2, 0.0, 1.0);
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

double geo_similarity(GeoPoint p, GeoPoint q, double max_km) {
  return std::max(0.0, 1.0 - haversine_km(p, q) / max_km);
}

double IdfStats::weight(const std::string& token) const {
  if (document_count == 0) return 1.0;
  auto it = idf.find(token);
  if (it != idf.end()) return it->second;
  return std::log(static_cast<double>(document_count));
}

IdfStats build_idf(std::span<const Vertex> vertices, std::string_view field) {
  IdfStats stats;
  std::unordered_map<std::string, std::size_t> df;
  for (const auto& v : vertices) {
    std::string text;
    if (field == "label") {
      text = v.normalized_label;
    } else {
      auto it = v.properties.find(std::string(field));
      if (it == v.properties.end()) continue;
      text = normalize_label(it->second);
    }
    auto tokens = split_whitespace(text);
    if (tokens.empty()) continue;
    ++stats.document_count;
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    for (auto& t : tokens) ++df[t];
  }
  const double n = static_cast<double>(stats.document_count);
  stats.idf.reserve(df.size());
  for (auto& [token, count] : df) stats.idf.emplace(token, std::log(n / static_cast<double>(count)));
  return stats;
}

double soft_tfidf(std::string_view a, std::string_view b, const IdfStats& stats, double inner_threshold) {
  const TokenVector ta = weigh(a, stats);
  const TokenVector tb = weigh(b, stats);
  if (ta.tokens.empty() && tb.tokens.empty()) return 1.0;
  if (ta.tokens.empty() || tb.tokens.empty()) return 0.0;
  if (ta.tokens == tb.tokens && ta.weights == tb.weights) return 1.0;

  // Orientation depends only on the token sets, so f(a,b) and f(b,a) run the same computation.
  const bool a_rows = ta.tokens.size() != tb.tokens.size() ? ta.tokens.size() < tb.tokens.size()
                            : ta.tokens != tb.tokens ? ta.tokens < tb.tokens
                                                     : ta.weights <= tb.weights;
  const TokenVector& rows = a_rows ? ta : tb;
  const TokenVector& cols = a_rows ? tb : ta;
  std::vector<std::vector<double>> w(rows.tokens.size(), std::vector<double>(cols.tokens.size(), 0.0));
  bool any = false;
  for (std::size_t i = 0; i < rows.tokens.size(); ++i) {
    for (std::size_t j = 0; j < cols.tokens.size(); ++j) {
      const double s = jaro_winkler(rows.tokens[i], cols.tokens[j]);
      if (s >= inner_threshold) {
        w[i][j] = rows.weights[i] * cols.weights[j] * s;
        any = true;
      }
    }
  }
  if (!any) return 0.0;
  return std::clamp(max_assignment(w, rows.tokens.size(), cols.tokens.size()), 0.0, 1.0);
}

FieldStats FieldStats::build(std::span<const Vertex> vertices) {
  return FieldStats{build_idf(vertices, "label"), build_idf(vertices, "artist"), build_idf(vertices, "album")};
}

double vertex_similarity(const Vertex& a, const Vertex& b, const PipelineConfig& cfg, const FieldStats* stats) {
  return profile_similarity({a.normalized_label, a.coords, a.properties}, {b.normalized_label, b.coords, b.properties},
                            cfg, stats);
}

double representative_similarity(const Representative& a, const Representative& b, const PipelineConfig& cfg,
                                 const FieldStats* stats) {
  return profile_similarity({a.label, a.coords, a.properties}, {b.label, b.coords, b.properties}, cfg, stats);
}

}  // namespace holo
