#pragma once
// Deterministic seeding: a splittable SeedStream from which every Monte Carlo
// substream is derived by hashing tags, and a draw wrapper whose output does
// not depend on standard-library distribution internals.

#include <cstdint>
#include <random>
#include <string_view>

namespace permlab {

namespace detail {

inline std::uint64_t splitmix_step(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t combine(std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
  return splitmix_step(x);
}

}  // namespace detail

// Raw draws on top of mt19937_64. Bounded draws use rejection, so they are
// unbiased and reproducible across standard-library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, bound), bound >= 1.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform on [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

// Immutable key into the substream tree. derive() children are independent;
// results depend only on the root seed and the tag path.
class SeedStream {
 public:
  explicit SeedStream(std::uint64_t seed) : state_(detail::combine(0x8f1bbcdcull, seed)) {}

  SeedStream derive(std::uint64_t tag) const {
    SeedStream child(*this);
    child.state_ = detail::combine(state_, tag);
    return child;
  }

  SeedStream derive(std::string_view tag) const { return derive(detail::fnv1a(tag)); }

  Rng make_rng() const {
    std::uint64_t s = state_;
    return Rng(detail::splitmix_step(s));
  }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace permlab
