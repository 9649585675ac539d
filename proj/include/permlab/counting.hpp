#pragma once
// Exact and Monte Carlo occurrence counting at all scales. The exact path is
// a leftmost-anchor window enumerator (cost O(n * f^{k-1})); the Monte Carlo
// path draws exactly uniform width-bounded index subsets in three stages and
// reports Hoeffding confidence half-widths.

#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "permlab/bigint.hpp"
#include "permlab/density.hpp"
#include "permlab/permutation.hpp"
#include "permlab/rng.hpp"

namespace permlab {

namespace detail {

inline std::int64_t floor_scale(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("invalid-argument: scale must be positive and finite");
  }
  return static_cast<std::int64_t>(std::floor(scale + 1e-9));
}

inline void check_scale_bounds(Value k, Value n, double scale) {
  const std::int64_t f = floor_scale(scale);
  if (f < k) throw std::invalid_argument("scale-too-small: floor(f) below pattern length");
  if (scale > static_cast<double>(n) + 1e-9) {
    throw std::invalid_argument("invalid-argument: scale exceeds permutation length");
  }
}

}  // namespace detail

// Number of k-element subsets of [n] with width <= floor(scale), as the sum
// over widths w of (n - w + 1) * C(w-2, k-2). Requires 2 <= k <= scale <= n.
inline BigInt width_bounded_subset_count(std::int64_t n, std::int64_t k, double scale) {
  if (k < 2) throw std::invalid_argument("invalid-argument: subset count needs k >= 2");
  if (k > n) throw std::invalid_argument("invalid-argument: k exceeds n");
  detail::check_scale_bounds(k, n, scale);
  const std::int64_t f = detail::floor_scale(scale);
  BigInt total = 0;
  BigInt interior = 1;  // C(w-2, k-2), starting at w = k
  for (std::int64_t w = k; w <= f; ++w) {
    if (w > k) {
      // C(w-2, k-2) = C(w-3, k-2) * (w-2) / (w-k)
      interior *= (w - 2);
      interior /= (w - k);
    }
    total += BigInt(n - w + 1) * interior;
  }
  return total;
}

// Closed form for the same quantity at integer scale:
// (f+1-k)(nk-fk+f) / (k(k-1)) * C(f-1, k-2).
inline BigInt width_bounded_subset_count_closed_form(std::int64_t n, std::int64_t k,
                                                     std::int64_t f) {
  if (k < 2) throw std::invalid_argument("invalid-argument: subset count needs k >= 2");
  if (f < k || f > n) throw std::invalid_argument("invalid-argument: need k <= f <= n");
  BigInt numerator = BigInt(f + 1 - k) * BigInt(n * k - f * k + f) * binomial(f - 1, k - 2);
  const BigInt denom = BigInt(k) * (k - 1);
  if (numerator % denom != 0) {
    throw std::logic_error("closed form must be an exact integer");
  }
  return numerator / denom;
}

// Leading-order size of the same family: n * f^{k-1} / (k-1)!.
inline double asymptotic_subset_count(double n, std::int64_t k, double scale) {
  double result = n;
  for (std::int64_t i = 1; i < k; ++i) result *= scale / static_cast<double>(i);
  return result;
}

// Occurrences of `pattern` in `host` of width <= floor(scale). Enumerates, for
// each leftmost index, the interior index choices inside the window.
inline BigInt count_occurrences_width(const Permutation& pattern, const Permutation& host,
                                      double scale) {
  const Value k = pattern.length();
  const Value n = host.length();
  if (k > n) throw std::invalid_argument("pattern-too-long: pattern exceeds host length");
  detail::check_scale_bounds(k, n, scale);
  if (k == 1) return BigInt(n);

  const std::int64_t f = detail::floor_scale(scale);
  const std::uint64_t target = pattern_code(pattern);
  std::uint64_t found = 0;
  std::vector<Value> window(static_cast<std::size_t>(k));

  // chosen[0] fixed to the anchor; depth d picks index chosen[d] > chosen[d-1]
  // with enough room for the remaining k-1-d picks inside [anchor, anchor+f-1].
  std::vector<Value> chosen(static_cast<std::size_t>(k));
  for (Value anchor = 1; anchor + k - 1 <= n; ++anchor) {
    const Value hi = std::min<Value>(n, anchor + f - 1);
    if (hi - anchor < k - 1) continue;
    chosen[0] = anchor;
    window[0] = host.at(anchor);
    Value depth = 1;
    chosen[1] = anchor;  // pre-increment form below
    while (depth >= 1) {
      ++chosen[static_cast<std::size_t>(depth)];
      if (chosen[static_cast<std::size_t>(depth)] > hi - (k - 1 - depth)) {
        --depth;
        continue;
      }
      window[static_cast<std::size_t>(depth)] =
          host.at(chosen[static_cast<std::size_t>(depth)]);
      if (depth == k - 1) {
        if (pattern_code(std::span<const Value>(window)) == target) ++found;
      } else {
        ++depth;
        chosen[static_cast<std::size_t>(depth)] = chosen[static_cast<std::size_t>(depth - 1)];
      }
    }
  }
  return BigInt(found);
}

// Global occurrence count: width bounded only by the host length.
inline BigInt count_occurrences(const Permutation& pattern, const Permutation& host) {
  return count_occurrences_width(pattern, host, static_cast<double>(host.length()));
}

// Exact density at scale f: nu_f / binom(n,k)_f. For k = 1 the density is 1
// by convention (single points always fit any window).
inline DensityEstimate density_at_scale(const Permutation& pattern, const Permutation& host,
                                        double scale) {
  const Value k = pattern.length();
  const Value n = host.length();
  if (k > n) throw std::invalid_argument("pattern-too-long: pattern exceeds host length");
  detail::check_scale_bounds(k, n, scale);
  if (k == 1) return DensityEstimate::exact_value(1.0);
  const BigInt nu = count_occurrences_width(pattern, host, scale);
  const BigInt denom = width_bounded_subset_count(n, k, scale);
  return DensityEstimate::exact_value(to_double(nu) / to_double(denom));
}

// Consecutive-window density: nu_k / (n - k + 1).
inline DensityEstimate density_local(const Permutation& pattern, const Permutation& host) {
  return density_at_scale(pattern, host, static_cast<double>(pattern.length()));
}

// Exactly uniform sampler over k-element subsets of [n] with width <=
// floor(scale). Stage one samples the width from its exact integer weight
// table, stage two the leftmost position, stage three the interior indices.
class WidthSubsetSampler {
 public:
  WidthSubsetSampler(std::int64_t n, std::int64_t k, double scale) : n_(n), k_(k) {
    if (k < 1 || k > n) throw std::invalid_argument("invalid-argument: need 1 <= k <= n");
    detail::check_scale_bounds(k, n, scale);
    f_ = detail::floor_scale(scale);
    if (k_ >= 2) {
      cumulative_.reserve(static_cast<std::size_t>(f_ - k_ + 1));
      BigInt running = 0;
      BigInt interior = 1;  // C(w-2, k-2)
      for (std::int64_t w = k_; w <= f_; ++w) {
        if (w > k_) {
          interior *= (w - 2);
          interior /= (w - k_);
        }
        running += BigInt(n_ - w + 1) * interior;
        cumulative_.push_back(running);
      }
      total_ = running;
    }
  }

  std::int64_t width_bound() const { return f_; }

  // Fills `out` (size k) with a uniform draw; `out` is sorted ascending.
  void sample_into(Rng& rng, std::vector<Value>& out) const {
    out.resize(static_cast<std::size_t>(k_));
    if (k_ == 1) {
      out[0] = 1 + static_cast<Value>(rng.next_below(static_cast<std::uint64_t>(n_)));
      return;
    }
    const BigInt u = uniform_bigint(rng, total_);
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const std::int64_t w = k_ + static_cast<std::int64_t>(it - cumulative_.begin());
    const Value pos =
        1 + static_cast<Value>(rng.next_below(static_cast<std::uint64_t>(n_ - w + 1)));
    out[0] = pos;
    out[static_cast<std::size_t>(k_ - 1)] = pos + w - 1;
    if (k_ > 2) {
      // Floyd's sampling: k-2 distinct offsets from [1, w-2].
      const std::int64_t need = k_ - 2;
      const std::int64_t slots = w - 2;
      std::vector<Value> picked;
      picked.reserve(static_cast<std::size_t>(need));
      for (std::int64_t i = slots - need + 1; i <= slots; ++i) {
        const Value t = 1 + static_cast<Value>(rng.next_below(static_cast<std::uint64_t>(i)));
        bool duplicate = false;
        for (Value p : picked) {
          if (p == t) {
            duplicate = true;
            break;
          }
        }
        picked.push_back(duplicate ? static_cast<Value>(i) : t);
      }
      std::sort(picked.begin(), picked.end());
      for (std::int64_t j = 0; j < need; ++j) {
        out[static_cast<std::size_t>(j + 1)] = pos + picked[static_cast<std::size_t>(j)];
      }
    }
  }

  IndexSubset sample(Rng& rng) const {
    std::vector<Value> idx;
    sample_into(rng, idx);
    return IndexSubset::from_indices(std::move(idx));
  }

 private:
  std::int64_t n_;
  std::int64_t k_;
  std::int64_t f_ = 1;
  std::vector<BigInt> cumulative_;
  BigInt total_ = 1;
};

inline IndexSubset sample_width_bounded_subset(std::int64_t n, std::int64_t k, double scale,
                                               Rng& rng) {
  return WidthSubsetSampler(n, k, scale).sample(rng);
}

namespace detail {

constexpr std::int64_t kSampleChunk = 4096;

// Shared-sample pattern tally; chunked substreams keep results independent of
// any outer parallel scheduling.
inline std::unordered_map<std::uint64_t, std::int64_t> tally_patterns(
    const Permutation& host, std::int64_t k, double scale, std::int64_t samples,
    const SeedStream& stream) {
  const WidthSubsetSampler sampler(host.length(), k, scale);
  std::unordered_map<std::uint64_t, std::int64_t> counts;
  std::vector<Value> idx;
  std::vector<Value> window(static_cast<std::size_t>(k));
  std::int64_t done = 0;
  for (std::int64_t chunk = 0; done < samples; ++chunk) {
    Rng rng = stream.derive(static_cast<std::uint64_t>(chunk)).make_rng();
    const std::int64_t batch = std::min(kSampleChunk, samples - done);
    for (std::int64_t s = 0; s < batch; ++s) {
      sampler.sample_into(rng, idx);
      for (std::int64_t a = 0; a < k; ++a) {
        window[static_cast<std::size_t>(a)] = host.at(idx[static_cast<std::size_t>(a)]);
      }
      ++counts[pattern_code(std::span<const Value>(window))];
    }
    done += batch;
  }
  return counts;
}

}  // namespace detail

// Monte Carlo density at scale f for a single pattern.
inline DensityEstimate estimate_density_at_scale(const Permutation& pattern,
                                                 const Permutation& host, double scale,
                                                 std::int64_t samples, double confidence,
                                                 const SeedStream& stream) {
  const Value k = pattern.length();
  if (k > host.length()) {
    throw std::invalid_argument("pattern-too-long: pattern exceeds host length");
  }
  detail::check_scale_bounds(k, host.length(), scale);
  if (samples < 1) throw std::invalid_argument("invalid-argument: samples must be >= 1");
  const auto counts = detail::tally_patterns(host, k, scale, samples, stream);
  const auto it = counts.find(pattern_code(pattern));
  const std::int64_t hits = it == counts.end() ? 0 : it->second;
  return DensityEstimate::monte_carlo(
      static_cast<double>(hits) / static_cast<double>(samples), samples, confidence);
}

// Monte Carlo densities for every pattern of length k from one shared sample
// set, so the estimates partition: they sum to exactly 1.
inline std::map<Permutation, DensityEstimate> estimate_density_vector(
    const Permutation& host, Value k, double scale, std::int64_t samples, double confidence,
    const SeedStream& stream) {
  if (k > host.length()) {
    throw std::invalid_argument("pattern-too-long: pattern exceeds host length");
  }
  detail::check_scale_bounds(k, host.length(), scale);
  if (samples < 1) throw std::invalid_argument("invalid-argument: samples must be >= 1");
  const auto counts = detail::tally_patterns(host, k, scale, samples, stream);
  std::map<Permutation, DensityEstimate> out;
  for (const Permutation& pat : all_patterns(k)) {
    const auto it = counts.find(pattern_code(pat));
    const std::int64_t hits = it == counts.end() ? 0 : it->second;
    out.emplace(pat, DensityEstimate::monte_carlo(
                         static_cast<double>(hits) / static_cast<double>(samples), samples,
                         confidence));
  }
  return out;
}

}  // namespace permlab
