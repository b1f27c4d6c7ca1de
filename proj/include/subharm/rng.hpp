#pragma once

// Counter-based pseudo-random stream. Every draw is a pure function of
// (seed, stream name, index, draw counter), so instances can be generated in
// any order or on any thread without perturbing each other.

#include <cstdint>
#include <string_view>

namespace subharm {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// Derives the seed of one instance from the suite seed.
inline constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                           std::string_view stream,
                                           std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(fnv1a64(stream)) ^
                    splitmix64(index + 0x632BE59BD9B4E019ULL));
}

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::string_view stream = {},
                      std::uint64_t index = 0)
      : key_(derive_seed(seed, stream, index)) {}

  std::uint64_t next_u64() {
    return splitmix64(key_ ^ splitmix64(++counter_ * 0xD1B54A32D192ED03ULL));
  }

  /// Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on the closed range [lo, hi].
  long uniform_int(long lo, long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long>(next_u64() % span);
  }

  bool bernoulli(double p) { return uniform() < p; }

  std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace subharm
