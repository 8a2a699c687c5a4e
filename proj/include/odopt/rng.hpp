#pragma once

#include <cstdint>
#include <limits>

namespace odopt {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed for a named sub-stream. Streams are keyed by (master, stream, a, b)
/// so a draw never depends on the order in which other streams were used.
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                           std::uint64_t a = 0, std::uint64_t b = 0) noexcept {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ stream);
  h = splitmix64(h ^ a);
  return splitmix64(h ^ b);
}

/// Stream identifiers used by the experiment driver.
enum class Stream : std::uint64_t {
  graph = 1,
  schedule = 2,
  sensors = 3,
  observations = 4,
  jamming = 5,
};

inline constexpr std::uint64_t derive_seed(std::uint64_t master, Stream s, std::uint64_t a = 0,
                                           std::uint64_t b = 0) noexcept {
  return derive_seed(master, static_cast<std::uint64_t>(s), a, b);
}

/// Counter-based generator: output k is splitmix64(key + k * golden). Cheap to
/// construct, so one instance per (agent, round) is fine.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    return splitmix64(key_ + (counter_++) * 0x9E3779B97F4A7C15ULL);
  }

  /// Uniform on [0, 1) from the top 53 bits.
  constexpr double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace odopt
