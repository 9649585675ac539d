#pragma once
// Exact integer arithmetic for subset counts. Binomial tails over widths can
// exceed 64 bits well inside the supported parameter range, so counts are
// held in arbitrary-precision integers and only converted to double at the
// density boundary.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>

#include "permlab/rng.hpp"

namespace permlab {

using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const BigInt& x) { return x.convert_to<double>(); }

inline BigInt binomial(std::int64_t n, std::int64_t r) {
  if (r < 0 || n < 0 || r > n) return 0;
  if (r > n - r) r = n - r;
  BigInt result = 1;
  for (std::int64_t i = 1; i <= r; ++i) {
    result *= (n - r + i);
    result /= i;  // exact at every step
  }
  return result;
}

// Uniform on [0, bound) by rejection over the minimal bit width.
inline BigInt uniform_bigint(Rng& rng, const BigInt& bound) {
  if (bound <= 0) throw std::invalid_argument("invalid-argument: bound must be positive");
  if (bound == 1) return 0;
  const unsigned bits = boost::multiprecision::msb(bound - 1) + 1;
  const unsigned words = (bits + 63) / 64;
  const unsigned excess = words * 64 - bits;
  for (;;) {
    BigInt x = 0;
    for (unsigned w = 0; w < words; ++w) {
      x <<= 64;
      x |= BigInt(rng.next_u64());
    }
    x >>= excess;
    if (x < bound) return x;
  }
}

}  // namespace permlab
