#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace snakes {

// splitmix64 step, used for seed expansion and for deriving per-match seeds.
// Reference: Vigna, http://prng.di.unimi.it/splitmix64.c
constexpr std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// FNV-1a over a string, for folding identifiers into seeds.
constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (char c : s) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x00000100000001b3ull;
  }
  return hash;
}

// Folds a list of words into one seed. Order-sensitive by construction.
constexpr std::uint64_t mix_seed(std::initializer_list<std::uint64_t> words) {
  std::uint64_t acc = 0x6a09e667f3bcc909ull;
  for (std::uint64_t w : words) {
    acc ^= w;
    splitmix64(acc);
    acc = (acc << 23) | (acc >> 41);
    acc ^= splitmix64(acc);
  }
  return acc;
}

// Xoshiro256** — the match RNG embedded in GameState. The algorithm is
// public, tiny, and produces identical streams on every platform, which
// keeps replays portable. Seeded by splitmix64 expansion of a 64-bit seed.
// Reference: Blackman & Vigna, http://prng.di.unimi.it/xoshiro256starstar.c
class Xoshiro256StarStar {
 public:
  constexpr Xoshiro256StarStar() : Xoshiro256StarStar(0) {}

  explicit constexpr Xoshiro256StarStar(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  constexpr std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform draw from [0, bound) via rejection sampling; no modulo bias.
  constexpr std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % bound;
    std::uint64_t draw = next();
    while (draw >= limit) draw = next();
    return draw % bound;
  }

  friend constexpr bool operator==(const Xoshiro256StarStar&,
                                   const Xoshiro256StarStar&) = default;

 private:
  static constexpr std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
};

}  // namespace snakes
