#pragma once

#include <cstdint>
#include <string_view>

// Deterministic counter-based random streams.
//
// Every random decision in the generator is a pure function of a stream key
// and a counter.  Streams carry no mutable state, so draws can happen from
// any thread in any order and still agree bit for bit; unused draw slots
// cost nothing and never shift later draws.

namespace rewave::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

// splitmix64 finalizer (Steele/Lea/Flood constants).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

// Order-sensitive seed combine: mix(a, b) != mix(b, a) in general.
constexpr std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  return mix64(a + kGolden * (b + 1));
}

constexpr std::uint64_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix(mix(a, b), c);
}

// FNV-1a, folds stream labels ("aug", "split") into seed material.
constexpr std::uint64_t hash_label(std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char ch : label) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ull;
  }
  return h;
}

// Random-access view of the splitmix64 sequence seeded with `key`:
// at(i) equals the (i+1)-th output of a stateful splitmix64 generator.
class Stream {
 public:
  explicit constexpr Stream(std::uint64_t key) : key_(key) {}

  constexpr std::uint64_t at(std::uint64_t counter) const {
    return mix64(key_ + (counter + 1) * kGolden);
  }

  // Uniform in [0, 1), 53 mantissa bits.
  constexpr double uniform01(std::uint64_t counter) const {
    return static_cast<double>(at(counter) >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound) via widening multiply.
  constexpr std::uint64_t below(std::uint64_t counter, std::uint64_t bound) const {
    using u128 = unsigned __int128;
    return static_cast<std::uint64_t>((static_cast<u128>(at(counter)) * bound) >> 64);
  }

  constexpr std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
};

}  // namespace rewave::rng
