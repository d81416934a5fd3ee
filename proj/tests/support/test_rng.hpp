#pragma once

// Hand-rolled generators for the property tests. SplitMix64 keeps every case
// reproducible from its seed on any platform.

#include <cstdint>
#include <string>
#include <vector>

namespace holo::testing {

class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  /// Uniform in [0, n); n > 0.
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }
  /// Uniform in [lo, hi].
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double range(double lo, double hi) { return lo + (hi - lo) * unit(); }
  bool chance(double p) { return unit() < p; }

  template <class T>
  const T& pick(const std::vector<T>& items) {
    return items[below(items.size())];
  }

  /// Lowercase word over a small alphabet so that random pairs share characters.
  std::string word(std::size_t min_len, std::size_t max_len, const std::string& alphabet = "abcdeilmnorst") {
    std::string w;
    const std::size_t len = between(min_len, max_len);
    for (std::size_t i = 0; i < len; ++i) w += alphabet[below(alphabet.size())];
    return w;
  }

  std::string phrase(std::size_t min_words, std::size_t max_words, const std::vector<std::string>& vocabulary) {
    std::string out;
    const std::size_t n = between(min_words, max_words);
    for (std::size_t i = 0; i < n; ++i) {
      if (!out.empty()) out += ' ';
      out += pick(vocabulary);
    }
    return out;
  }

 private:
  std::uint64_t state_;
};

}  // namespace holo::testing
