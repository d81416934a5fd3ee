#include "holo/generator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include "holo/error.hpp"
#include "holo/phases.hpp"

namespace holo {
namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t domain, std::uint64_t index) {
  return mix(mix(seed ^ mix(domain)) ^ index);
}

__extension__ using Wide = unsigned __int128;

// Portable draws on top of mt19937_64; the standard distributions are not
// reproducible across library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<Wide>(engine_()) * n) >> 64);
  }
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

 private:
  std::mt19937_64 engine_;
};

constexpr const char* kOnsets[] = {"b", "br", "c", "ch", "d", "dr", "f", "fl", "g", "gr", "h", "j", "k", "kl",
                                   "l", "m", "n", "p", "pr", "qu", "r", "s", "sh", "sl", "st", "t", "th", "tr",
                                   "v", "w", "y", "z"};
constexpr const char* kVowels[] = {"a", "e", "i", "o", "u", "ai", "ea", "ou", "ie", "oo", "y"};
constexpr const char* kCodas[] = {"", "", "", "n", "r", "s", "l", "m", "nd", "st", "x", "ck"};
constexpr const char* kLanguages[] = {"eng", "ger", "fre", "spa", "ita", "por", "jpn", "swe"};

template <std::size_t N>
const char* pick(Rng& rng, const char* const (&items)[N]) {
  return items[rng.below(N)];
}

std::string make_word(Rng& rng) {
  std::string w;
  const auto syllables = rng.between(1, 3);
  for (std::int64_t s = 0; s < syllables; ++s) {
    w += pick(rng, kOnsets);
    w += pick(rng, kVowels);
    if (s + 1 == syllables || rng.chance(0.3)) w += pick(rng, kCodas);
  }
  return w;
}

std::string make_phrase(Rng& rng, std::int64_t min_words, std::int64_t max_words) {
  std::string out;
  const auto words = rng.between(min_words, max_words);
  for (std::int64_t i = 0; i < words; ++i) {
    std::string w = make_word(rng);
    w[0] = static_cast<char>(w[0] - 'a' + 'A');
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

std::string artist_name(std::uint64_t seed, std::uint64_t artist) {
  Rng rng(stream_seed(seed, 1, artist));
  return make_phrase(rng, 1, 2);
}

std::string album_name(std::uint64_t seed, std::uint64_t artist, std::uint64_t album) {
  Rng rng(stream_seed(seed, 2, artist * 16 + album));
  return make_phrase(rng, 1, 3);
}

std::string edit_characters(Rng& rng, std::string text) {
  constexpr const char* kLetters = "abcdefghijklmnopqrstuvwxyz";
  const auto edits = rng.between(1, 2);
  for (std::int64_t e = 0; e < edits && !text.empty(); ++e) {
    const std::size_t pos = rng.below(text.size());
    switch (rng.below(4)) {
      case 0:  // substitute
        text[pos] = kLetters[rng.below(26)];
        break;
      case 1:  // insert
        text.insert(text.begin() + static_cast<std::ptrdiff_t>(pos), kLetters[rng.below(26)]);
        break;
      case 2:  // delete
        if (text.size() > 1) text.erase(pos, 1);
        break;
      default:  // transpose
        if (pos + 1 < text.size()) std::swap(text[pos], text[pos + 1]);
        break;
    }
  }
  return text;
}

std::string format_year(Rng& rng, int year) {
  char buf[16];
  switch (rng.below(3)) {
    case 0:
      std::snprintf(buf, sizeof buf, "'%02d", year % 100);
      break;
    case 1:
      std::snprintf(buf, sizeof buf, "%02d", year % 100);
      break;
    default:
      std::snprintf(buf, sizeof buf, "%d", year);
      break;
  }
  return buf;
}

std::string format_length(Rng& rng, int millis) {
  const int seconds = millis / 1000;
  char buf[32];
  switch (rng.below(4)) {
    case 0:
      std::snprintf(buf, sizeof buf, "%dm %dsec", seconds / 60, seconds % 60);
      break;
    case 1:
      std::snprintf(buf, sizeof buf, "%02d:%02d", seconds / 60, seconds % 60);
      break;
    case 2:
      std::snprintf(buf, sizeof buf, "%d", millis);
      break;
    default:
      std::snprintf(buf, sizeof buf, "%.4f", static_cast<double>(millis) / 60000.0);
      break;
  }
  return buf;
}

struct BaseRecord {
  std::string title;
  std::string artist;
  std::string album;
  int year;
  int length_ms;
  std::string language;
  int number;
};

PropertyMap clean_properties(const BaseRecord& r) {
  return {{"artist", r.artist},
          {"album", r.album},
          {"year", std::to_string(r.year)},
          {"length", std::to_string(r.length_ms)},
          {"language", r.language},
          {"number", std::to_string(r.number)}};
}

Vertex corrupt(Rng& rng, const BaseRecord& base, VertexId id, const std::string& source, const CorruptionSpec& spec) {
  std::string title = base.title;
  PropertyMap props = clean_properties(base);
  if (rng.chance(spec.char_edit)) title = edit_characters(rng, title);
  if (rng.chance(spec.char_edit)) props["artist"] = edit_characters(rng, props["artist"]);
  if (rng.chance(spec.char_edit)) props["album"] = edit_characters(rng, props["album"]);
  if (rng.chance(spec.year_reformat)) props["year"] = format_year(rng, base.year);
  if (rng.chance(spec.length_reformat)) props["length"] = format_length(rng, base.length_ms);
  if (rng.chance(spec.field_omission)) {
    constexpr const char* kOmittable[] = {"artist", "album", "year", "length", "language"};
    props.erase(pick(rng, kOmittable));
  }
  return make_vertex(id, std::move(title), source, {}, std::nullopt, std::move(props));
}

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(std::string(name) + " must be in [0,1]");
}

}  // namespace

void SizeDistribution::validate() const {
  if (proportions.empty()) throw ConfigError("size distribution is empty");
  if (proportions.size() > kSyntheticSources) {
    throw ConfigError("cluster sizes above " + std::to_string(kSyntheticSources) + " cannot have distinct sources");
  }
  double sum = 0.0;
  for (double p : proportions) {
    check_probability(p, "size proportion");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("size proportions must sum to 1");
}

void CorruptionSpec::validate() const {
  check_probability(year_reformat, "year_reformat");
  check_probability(length_reformat, "length_reformat");
  check_probability(char_edit, "char_edit");
  check_probability(field_omission, "field_omission");
}

std::vector<std::size_t> plan_cluster_sizes(std::size_t n_clusters, const SizeDistribution& dist) {
  dist.validate();
  const std::size_t k = dist.proportions.size();
  std::vector<std::size_t> counts(k);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double quota = static_cast<double>(n_clusters) * dist.proportions[i];
    counts[i] = static_cast<std::size_t>(std::floor(quota));
    assigned += counts[i];
    remainders.emplace_back(quota - std::floor(quota), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t r = 0; assigned < n_clusters; ++r, ++assigned) ++counts[remainders[r % k].second];
  return counts;
}

SyntheticDataset generate_synthetic(std::size_t n_clusters, const SizeDistribution& dist, const CorruptionSpec& spec,
                                    Executor& exec) {
  if (n_clusters < 1) throw ConfigError("at least one cluster is required");
  spec.validate();
  const auto counts = plan_cluster_sizes(n_clusters, dist);

  std::vector<std::size_t> sizes;
  sizes.reserve(n_clusters);
  for (std::size_t i = 0; i < counts.size(); ++i) sizes.insert(sizes.end(), counts[i], i + 1);
  Rng master(stream_seed(spec.seed, 0, 0));
  for (std::size_t i = sizes.size(); i > 1; --i) std::swap(sizes[i - 1], sizes[master.below(i)]);

  std::vector<VertexId> first_id(n_clusters);
  VertexId next = 1;
  for (std::size_t c = 0; c < n_clusters; ++c) {
    first_id[c] = next;
    next += sizes[c];
  }
  const std::uint64_t artists = std::max<std::uint64_t>(1, n_clusters / 4);

  auto per_cluster = exec.map(n_clusters, [&](std::size_t c) {
    Rng rng(stream_seed(spec.seed, 3, c));
    BaseRecord base;
    base.title = make_phrase(rng, 1, 4);
    const std::uint64_t artist = rng.below(artists);
    base.artist = artist_name(spec.seed, artist);
    base.album = album_name(spec.seed, artist, rng.below(4));
    base.year = static_cast<int>(rng.between(1950, 2017));
    base.length_ms = static_cast<int>(rng.between(90, 600)) * 1000 + static_cast<int>(rng.below(1000));
    base.language = pick(rng, kLanguages);
    base.number = static_cast<int>(rng.between(1, 20));

    std::vector<std::size_t> sources(kSyntheticSources);
    std::iota(sources.begin(), sources.end(), std::size_t{1});
    for (std::size_t i = 0; i < sizes[c]; ++i) std::swap(sources[i], sources[i + rng.below(sources.size() - i)]);

    std::vector<Vertex> members;
    for (std::size_t m = 0; m < sizes[c]; ++m) {
      const VertexId id = first_id[c] + m;
      const std::string source = std::to_string(sources[m]);
      if (m == 0) {
        members.push_back(make_vertex(id, base.title, source, {}, std::nullopt, clean_properties(base)));
      } else {
        members.push_back(corrupt(rng, base, id, source, spec));
      }
    }
    return members;
  });

  SyntheticDataset out;
  out.vertices.reserve(next - 1);
  out.gold.reserve(n_clusters);
  for (auto& members : per_cluster) {
    std::vector<const Vertex*> ptrs;
    for (const auto& v : members) ptrs.push_back(&v);
    Cluster cluster;
    cluster.representative = build_representative(ptrs);
    cluster.members = cluster.representative.members;
    cluster.cid = cluster.members.front();
    out.gold.push_back(std::move(cluster));
    for (auto& v : members) out.vertices.push_back(std::move(v));
  }
  return out;
}

LinkSet derive_star_links(std::span<const Cluster> gold) {
  std::vector<LinkSet::Pair> pairs;
  for (const auto& c : gold) {
    if (c.members.empty()) continue;
    const VertexId center = *std::min_element(c.members.begin(), c.members.end());
    for (VertexId v : c.members) {
      if (v != center) pairs.emplace_back(center, v);
    }
  }
  return LinkSet(std::move(pairs));
}

std::vector<SimEdge> perturb_links(const LinkSet& links, std::span<const Vertex> vertices, const LinkNoise& noise) {
  check_probability(noise.thin, "thin");
  if (!(noise.wrong >= 0.0)) throw ConfigError("wrong must be >= 0");
  Rng rng(stream_seed(noise.seed, 4, 0));
  std::vector<LinkSet::Pair> pairs = links.pairs();
  const auto input = pairs.size();

  const auto drop = static_cast<std::size_t>(std::llround(noise.thin * static_cast<double>(input)));
  for (std::size_t i = 0; i < drop; ++i) std::swap(pairs[i], pairs[i + rng.below(pairs.size() - i)]);
  pairs.erase(pairs.begin(), pairs.begin() + static_cast<std::ptrdiff_t>(drop));

  const auto add = static_cast<std::size_t>(std::llround(noise.wrong * static_cast<double>(input)));
  if (add > 0 && vertices.size() < 2) throw InvalidInput("not enough vertices for random links");
  std::set<LinkSet::Pair> taken(links.pairs().begin(), links.pairs().end());
  std::size_t added = 0;
  std::size_t attempts = 0;
  while (added < add) {
    if (++attempts > 100 * (add + 10)) throw InvalidInput("could not place random cross-source links");
    const Vertex& a = vertices[rng.below(vertices.size())];
    const Vertex& b = vertices[rng.below(vertices.size())];
    if (a.id == b.id || a.source == b.source) continue;
    LinkSet::Pair p = std::minmax(a.id, b.id);
    if (!taken.insert(p).second) continue;
    pairs.push_back(p);
    ++added;
  }
  std::vector<SimEdge> edges;
  edges.reserve(pairs.size());
  for (const auto& [a, b] : pairs) edges.push_back(make_edge(a, b));
  return canonicalize(std::move(edges));
}

}  // namespace holo
