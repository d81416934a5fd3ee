#pragma once

// String, geographic and profile-level similarity measures. Every function
// here is pure and returns a value in [0,1] (except haversine_km).

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>

#include "holo/model.hpp"

namespace holo {

inline constexpr double kEarthRadiusKm = 6371.0;

/// Jaro similarity with the Winkler common-prefix boost (scale 0.1, at most
/// four prefix characters). Operates on code points.
double jaro_winkler(std::string_view a, std::string_view b);

double haversine_km(GeoPoint p, GeoPoint q);

/// max(0, 1 - distance / max_km).
double geo_similarity(GeoPoint p, GeoPoint q, double max_km);

/// Inverse document frequencies of the whitespace tokens of one field.
struct IdfStats {
  std::unordered_map<std::string, double> idf;
  std::size_t document_count = 0;

  /// Stored idf; unseen tokens count as occurring in one document. An empty
  /// corpus weighs every token 1.
  double weight(const std::string& token) const;
};

/// Field name "label" reads the normalized label; any other name reads the
/// property of that key. Vertices lacking the field are not documents.
IdfStats build_idf(std::span<const Vertex> vertices, std::string_view field);

/// Soft TF-IDF: tokens of both strings carry unit-normalized tf-idf weights
/// and are aligned one-to-one; a token pair may align only when its
/// Jaro-Winkler score reaches `inner_threshold`. The result is the best total
/// of weight_a * weight_b * jaro_winkler over all such alignments, which makes
/// the measure symmetric and bounded by 1.
double soft_tfidf(std::string_view a, std::string_view b, const IdfStats& stats, double inner_threshold);

/// Corpus statistics for the music profile.
struct FieldStats {
  IdfStats title;
  IdfStats artist;
  IdfStats album;

  static FieldStats build(std::span<const Vertex> vertices);
};

double vertex_similarity(const Vertex& a, const Vertex& b, const PipelineConfig& cfg, const FieldStats* stats);

double representative_similarity(const Representative& a, const Representative& b, const PipelineConfig& cfg,
                                 const FieldStats* stats);

}  // namespace holo
