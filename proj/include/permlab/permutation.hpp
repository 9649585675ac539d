#pragma once
// Permutations as immutable one-based value sequences, with the structural
// operations used by every construction: inverse, direct sum, substitution,
// box product, and pattern extraction. All operations are pure and all types
// are safe to share across threads.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace permlab {

using Value = std::int64_t;

class Permutation {
 public:
  // Validates that `values` is a bijection on [n]; throws std::invalid_argument
  // ("invalid-permutation") otherwise.
  static Permutation from_values(std::vector<Value> values) {
    const auto n = static_cast<Value>(values.size());
    if (n == 0) throw std::invalid_argument("invalid-permutation: empty value sequence");
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (Value v : values) {
      if (v < 1 || v > n) {
        throw std::invalid_argument("invalid-permutation: value out of range [1,n]");
      }
      if (seen[static_cast<std::size_t>(v - 1)]) {
        throw std::invalid_argument("invalid-permutation: duplicate value");
      }
      seen[static_cast<std::size_t>(v - 1)] = true;
    }
    return Permutation(std::move(values));
  }

  static Permutation identity(Value n) {
    std::vector<Value> v(static_cast<std::size_t>(require_positive(n)));
    std::iota(v.begin(), v.end(), Value{1});
    return Permutation(std::move(v));
  }

  static Permutation decreasing(Value n) {
    std::vector<Value> v(static_cast<std::size_t>(require_positive(n)));
    for (Value i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = n - i;
    return Permutation(std::move(v));
  }

  Value length() const { return static_cast<Value>(values_.size()); }

  // One-based access: at(1) .. at(n).
  Value at(Value i) const { return values_[static_cast<std::size_t>(i - 1)]; }

  const std::vector<Value>& values() const { return values_; }

  friend bool operator==(const Permutation& a, const Permutation& b) = default;
  friend bool operator<(const Permutation& a, const Permutation& b) {
    return a.values_ < b.values_;
  }

 private:
  static Value require_positive(Value n) {
    if (n < 1) throw std::invalid_argument("invalid-argument: length must be >= 1");
    return n;
  }
  explicit Permutation(std::vector<Value> v) : values_(std::move(v)) {}
  std::vector<Value> values_;
};

// A strictly increasing set of one-based indices. Range-checking against a
// host length happens at use sites (pattern_of).
class IndexSubset {
 public:
  static IndexSubset from_indices(std::vector<Value> indices) {
    if (indices.empty()) throw std::invalid_argument("invalid-subset: empty index set");
    for (std::size_t i = 0; i < indices.size(); ++i) {
      if (indices[i] < 1 || (i > 0 && indices[i] <= indices[i - 1])) {
        throw std::invalid_argument("invalid-subset: indices must be strictly increasing and >= 1");
      }
    }
    return IndexSubset(std::move(indices));
  }

  Value cardinality() const { return static_cast<Value>(indices_.size()); }
  Value width() const { return indices_.back() - indices_.front() + 1; }
  const std::vector<Value>& indices() const { return indices_; }

 private:
  explicit IndexSubset(std::vector<Value> idx) : indices_(std::move(idx)) {}
  std::vector<Value> indices_;
};

inline Permutation inverse(const Permutation& sigma) {
  const Value n = sigma.length();
  std::vector<Value> inv(static_cast<std::size_t>(n));
  for (Value i = 1; i <= n; ++i) inv[static_cast<std::size_t>(sigma.at(i) - 1)] = i;
  return Permutation::from_values(std::move(inv));
}

namespace detail {
inline Value checked_mul(Value a, Value b) {
  if (a > 0 && b > 0 && a > std::numeric_limits<Value>::max() / b) {
    throw std::invalid_argument("invalid-argument: result length overflows");
  }
  return a * b;
}
}  // namespace detail

// sigma followed by tau shifted up by |sigma|.
inline Permutation direct_sum(const Permutation& sigma, const Permutation& tau) {
  const Value k = sigma.length();
  std::vector<Value> out;
  out.reserve(static_cast<std::size_t>(k + tau.length()));
  out.insert(out.end(), sigma.values().begin(), sigma.values().end());
  for (Value v : tau.values()) out.push_back(v + k);
  return Permutation::from_values(std::move(out));
}

// Direct sum of c copies of sigma; c >= 1.
inline Permutation direct_sum_power(const Permutation& sigma, Value copies) {
  if (copies < 1) throw std::invalid_argument("invalid-argument: copy count must be >= 1");
  const Value u = sigma.length();
  const Value total = detail::checked_mul(u, copies);
  std::vector<Value> out;
  out.reserve(static_cast<std::size_t>(total));
  for (Value c = 0; c < copies; ++c) {
    const Value shift = c * u;
    for (Value v : sigma.values()) out.push_back(v + shift);
  }
  return Permutation::from_values(std::move(out));
}

// Inflation: each point (i, sigma(i)) becomes a copy of tau occupying index
// block i and value band sigma(i).
inline Permutation substitute(const Permutation& sigma, const Permutation& tau) {
  const Value k = sigma.length();
  const Value l = tau.length();
  const Value total = detail::checked_mul(k, l);
  std::vector<Value> out;
  out.reserve(static_cast<std::size_t>(total));
  for (Value i = 1; i <= k; ++i) {
    const Value band = (sigma.at(i) - 1) * l;
    for (Value v : tau.values()) out.push_back(band + v);
  }
  return Permutation::from_values(std::move(out));
}

// Length k*l permutation made of l juxtaposed copies of sigma, whose inverse
// is made of k juxtaposed copies of tau^{-1}.
inline Permutation box_product(const Permutation& sigma, const Permutation& tau) {
  const Value k = sigma.length();
  const Value l = tau.length();
  const Value total = detail::checked_mul(k, l);
  std::vector<Value> out;
  out.reserve(static_cast<std::size_t>(total));
  for (Value i = 1; i <= total; ++i) {
    const Value s = sigma.at(((i - 1) % k) + 1);
    const Value t = tau.at((i - 1) / k + 1);
    out.push_back(l * (s - 1) + t);
  }
  return Permutation::from_values(std::move(out));
}

// Standardization of sigma restricted to K: the pattern of the subset.
inline Permutation pattern_of(const Permutation& sigma, const IndexSubset& subset) {
  if (subset.indices().back() > sigma.length()) {
    throw std::invalid_argument("invalid-subset: index exceeds permutation length");
  }
  const std::size_t k = subset.indices().size();
  std::vector<Value> picked;
  picked.reserve(k);
  for (Value i : subset.indices()) picked.push_back(sigma.at(i));
  std::vector<Value> ranks(k);
  for (std::size_t a = 0; a < k; ++a) {
    Value r = 1;
    for (std::size_t b = 0; b < k; ++b) {
      if (picked[b] < picked[a]) ++r;
    }
    ranks[a] = r;
  }
  return Permutation::from_values(std::move(ranks));
}

// All patterns of length k in lexicographic order.
inline std::vector<Permutation> all_patterns(Value k) {
  std::vector<Value> v(static_cast<std::size_t>(k));
  std::iota(v.begin(), v.end(), Value{1});
  std::vector<Permutation> out;
  do {
    out.push_back(Permutation::from_values(v));
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

// Packs the standardization of `window` into 4-bit ranks; supports k <= 16.
// Used as a cheap pattern key in counting and sampling loops.
inline std::uint64_t pattern_code(std::span<const Value> window) {
  const std::size_t k = window.size();
  std::uint64_t code = 0;
  for (std::size_t a = 0; a < k; ++a) {
    std::uint64_t r = 0;
    for (std::size_t b = 0; b < k; ++b) {
      if (window[b] < window[a]) ++r;
    }
    code |= r << (4 * a);
  }
  return code;
}

inline std::uint64_t pattern_code(const Permutation& p) {
  return pattern_code(std::span<const Value>(p.values()));
}

// Text format: one line of comma- or whitespace-separated one-based values.
// A single multi-digit token of digits 1..9 is read as the compact form,
// e.g. "35142" denotes 3 5 1 4 2.
inline Permutation parse_permutation(std::string_view text) {
  std::string buf(text);
  for (char& c : buf) {
    if (c == ',') c = ' ';
  }
  std::istringstream in(buf);
  std::vector<Value> vals;
  std::string tok;
  std::vector<std::string> tokens;
  while (in >> tok) tokens.push_back(tok);
  if (tokens.empty()) throw std::invalid_argument("invalid-permutation: empty input");
  if (tokens.size() == 1 && tokens[0].size() > 1 &&
      tokens[0].find_first_not_of("123456789") == std::string::npos) {
    for (char c : tokens[0]) vals.push_back(c - '0');
    return Permutation::from_values(std::move(vals));
  }
  for (const std::string& t : tokens) {
    std::size_t pos = 0;
    Value v = 0;
    try {
      v = std::stoll(t, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("invalid-permutation: non-integer token '" + t + "'");
    }
    if (pos != t.size()) {
      throw std::invalid_argument("invalid-permutation: non-integer token '" + t + "'");
    }
    vals.push_back(v);
  }
  return Permutation::from_values(std::move(vals));
}

inline std::string format_permutation(const Permutation& p) {
  std::string out;
  for (std::size_t i = 0; i < p.values().size(); ++i) {
    if (i > 0) out += ' ';
    out += std::to_string(p.values()[i]);
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Permutation& p) {
  return os << format_permutation(p);
}

}  // namespace permlab
