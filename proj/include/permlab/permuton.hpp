#pragma once
// Limit objects: tiered, grid and V-shaped permutons with point sampling,
// random permutation generation, exact box-measure evaluation, and vertical
// strip restriction. Tiered permutons are the scalably convergent sampling
// sources used by the constructions; the +/-1 grid-vector encoding maps
// skinny monotone grid classes into (0,1).

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "permlab/density.hpp"
#include "permlab/permutation.hpp"
#include "permlab/rng.hpp"

namespace permlab {

enum class TierKind { kUniform, kIncreasing, kDecreasing };

struct Tier {
  double height;
  TierKind kind;
};

// Horizontal tiers listed bottom to top; heights must sum to 1.
class TieredPermuton {
 public:
  static TieredPermuton from_tiers(std::vector<Tier> tiers) {
    if (tiers.empty()) throw std::invalid_argument("invalid-argument: no tiers");
    double total = 0.0;
    for (const Tier& t : tiers) {
      if (!(t.height > 0.0)) {
        throw std::invalid_argument("invalid-argument: tier heights must be positive");
      }
      total += t.height;
    }
    if (std::fabs(total - 1.0) > 1e-12) {
      throw std::invalid_argument("invalid-argument: tier heights must sum to 1");
    }
    return TieredPermuton(std::move(tiers));
  }

  static TieredPermuton increasing() {
    return from_tiers({Tier{1.0, TierKind::kIncreasing}});
  }
  static TieredPermuton decreasing() {
    return from_tiers({Tier{1.0, TierKind::kDecreasing}});
  }
  static TieredPermuton uniform() { return from_tiers({Tier{1.0, TierKind::kUniform}}); }

  const std::vector<Tier>& tiers() const { return tiers_; }

  // Bottom edge of tier i.
  double tier_base(std::size_t i) const {
    double base = 0.0;
    for (std::size_t t = 0; t < i; ++t) base += tiers_[t].height;
    return base;
  }

 private:
  explicit TieredPermuton(std::vector<Tier> tiers) : tiers_(std::move(tiers)) {}
  std::vector<Tier> tiers_;
};

// d x d step-function permuton: cell masses with all row and column sums
// equal to 1/d. cells[row][col], rows bottom to top, columns left to right.
class GridPermuton {
 public:
  static GridPermuton from_cells(std::vector<std::vector<double>> cells) {
    const std::size_t d = cells.size();
    if (d == 0) throw std::invalid_argument("invalid-argument: empty grid");
    for (const auto& row : cells) {
      if (row.size() != d) throw std::invalid_argument("invalid-argument: grid must be square");
      for (double c : row) {
        if (c < 0.0) throw std::invalid_argument("invalid-argument: negative cell mass");
      }
    }
    const double share = 1.0 / static_cast<double>(d);
    for (std::size_t i = 0; i < d; ++i) {
      double row_sum = 0.0;
      double col_sum = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        row_sum += cells[i][j];
        col_sum += cells[j][i];
      }
      if (std::fabs(row_sum - share) > 1e-9 || std::fabs(col_sum - share) > 1e-9) {
        throw std::invalid_argument("invalid-argument: grid marginals must be uniform");
      }
    }
    return GridPermuton(std::move(cells));
  }

  std::size_t dimension() const { return cells_.size(); }
  const std::vector<std::vector<double>>& cells() const { return cells_; }

 private:
  explicit GridPermuton(std::vector<std::vector<double>> cells) : cells_(std::move(cells)) {}
  std::vector<std::vector<double>> cells_;
};

// Mass uniform on the decreasing diagonal of the left half and the increasing
// diagonal of the right half: y = |2x - 1|.
struct VPermuton {};

using Permuton = std::variant<TieredPermuton, GridPermuton, VPermuton>;

// Nonempty +/-1 vector encoding a skinny monotone grid class.
class GridVector {
 public:
  static GridVector from_entries(std::vector<int> entries) {
    if (entries.empty()) throw std::invalid_argument("invalid-argument: empty vector");
    for (int e : entries) {
      if (e != 1 && e != -1) {
        throw std::invalid_argument("invalid-argument: entries must be +1 or -1");
      }
    }
    return GridVector(std::move(entries));
  }

  const std::vector<int>& entries() const { return entries_; }

 private:
  explicit GridVector(std::vector<int> entries) : entries_(std::move(entries)) {}
  std::vector<int> entries_;
};

// Tiers of equal height numbered from the top: entry i of the vector sets the
// orientation of the i-th tier from the top.
inline TieredPermuton tiered_from_vector(const GridVector& v) {
  const std::size_t d = v.entries().size();
  std::vector<Tier> tiers(d);
  for (std::size_t i = 0; i < d; ++i) {
    const int dir = v.entries()[i];
    tiers[d - 1 - i] = Tier{1.0 / static_cast<double>(d),
                            dir == 1 ? TierKind::kIncreasing : TierKind::kDecreasing};
  }
  return TieredPermuton::from_tiers(std::move(tiers));
}

// alpha(v) = (1 + sum_i v_i / 2^i) / 2, injective into (0,1).
inline double alpha_of_vector(const GridVector& v) {
  double sum = 1.0;
  double weight = 1.0;
  for (int e : v.entries()) {
    weight *= 0.5;
    sum += weight * static_cast<double>(e);
  }
  return 0.5 * sum;
}

struct Point {
  double x;
  double y;
};

inline Point sample_point(const TieredPermuton& gamma, Rng& rng) {
  const double r = rng.next_double();
  double base = 0.0;
  const auto& tiers = gamma.tiers();
  std::size_t pick = tiers.size() - 1;
  double acc = 0.0;
  for (std::size_t i = 0; i < tiers.size(); ++i) {
    acc += tiers[i].height;
    if (r < acc) {
      pick = i;
      break;
    }
  }
  base = gamma.tier_base(pick);
  const Tier& tier = tiers[pick];
  const double x = rng.next_double();
  double y = 0.0;
  switch (tier.kind) {
    case TierKind::kIncreasing:
      y = base + x * tier.height;
      break;
    case TierKind::kDecreasing:
      y = base + (1.0 - x) * tier.height;
      break;
    case TierKind::kUniform:
      y = base + rng.next_double() * tier.height;
      break;
  }
  return Point{x, y};
}

inline Point sample_point(const GridPermuton& gamma, Rng& rng) {
  const std::size_t d = gamma.dimension();
  double r = rng.next_double();
  std::size_t row = d - 1;
  std::size_t col = d - 1;
  double acc = 0.0;
  bool chosen = false;
  for (std::size_t i = 0; i < d && !chosen; ++i) {
    for (std::size_t j = 0; j < d && !chosen; ++j) {
      acc += gamma.cells()[i][j];
      if (r < acc) {
        row = i;
        col = j;
        chosen = true;
      }
    }
  }
  const double cell = 1.0 / static_cast<double>(d);
  return Point{(static_cast<double>(col) + rng.next_double()) * cell,
               (static_cast<double>(row) + rng.next_double()) * cell};
}

inline Point sample_point(const VPermuton&, Rng& rng) {
  const double x = rng.next_double();
  return Point{x, std::fabs(2.0 * x - 1.0)};
}

inline Point sample_point(const Permuton& gamma, Rng& rng) {
  return std::visit([&rng](const auto& g) { return sample_point(g, rng); }, gamma);
}

// k points sorted by x, y's standardized. Coordinate collisions (probability
// zero in exact arithmetic) are resolved by redrawing the colliding point.
inline Permutation sample_permutation(const Permuton& gamma, Value k, Rng& rng) {
  if (k < 1) throw std::invalid_argument("invalid-argument: length must be >= 1");
  std::vector<Point> points(static_cast<std::size_t>(k));
  for (auto& p : points) p = sample_point(gamma, rng);

  std::vector<std::size_t> order(points.size());
  for (int attempt = 0; attempt < 64; ++attempt) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&points](std::size_t a, std::size_t b) {
      return points[a].x < points[b].x;
    });
    std::size_t collision = points.size();
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      if (points[order[i]].x == points[order[i + 1]].x) {
        collision = order[i + 1];
        break;
      }
    }
    if (collision == points.size()) {
      std::vector<double> ys(points.size());
      for (std::size_t i = 0; i < points.size(); ++i) ys[i] = points[order[i]].y;
      std::vector<double> sorted_ys = ys;
      std::sort(sorted_ys.begin(), sorted_ys.end());
      for (std::size_t i = 0; i + 1 < sorted_ys.size(); ++i) {
        if (sorted_ys[i] == sorted_ys[i + 1]) {
          // find a point with the duplicated y and redraw it
          for (std::size_t p = 0; p < points.size(); ++p) {
            if (points[p].y == sorted_ys[i]) {
              collision = p;
              break;
            }
          }
          break;
        }
      }
    }
    if (collision == points.size()) {
      std::vector<double> ys(points.size());
      for (std::size_t i = 0; i < points.size(); ++i) ys[i] = points[order[i]].y;
      std::vector<Value> values(points.size());
      std::vector<std::size_t> rank(points.size());
      for (std::size_t i = 0; i < rank.size(); ++i) rank[i] = i;
      std::sort(rank.begin(), rank.end(),
                [&ys](std::size_t a, std::size_t b) { return ys[a] < ys[b]; });
      for (std::size_t r = 0; r < rank.size(); ++r) {
        values[rank[r]] = static_cast<Value>(r) + 1;
      }
      return Permutation::from_values(std::move(values));
    }
    points[collision] = sample_point(gamma, rng);
  }
  throw std::runtime_error("sample_permutation: persistent coordinate collisions");
}

// Exact measure of the box [0,x] x [0,y].
inline double measure_box(const TieredPermuton& gamma, double x, double y) {
  if (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0) {
    throw std::invalid_argument("invalid-argument: box corner outside unit square");
  }
  double mass = 0.0;
  double base = 0.0;
  for (const Tier& tier : gamma.tiers()) {
    const double top = base + tier.height;
    switch (tier.kind) {
      case TierKind::kUniform: {
        const double overlap = std::max(0.0, std::min(y, top) - base);
        mass += x * overlap;
        break;
      }
      case TierKind::kIncreasing: {
        // support {(t, base + t*h) : t in [0,1]} with linear mass in t
        if (y > base) {
          const double t_cap = std::min(1.0, (y - base) / tier.height);
          mass += tier.height * std::min(x, t_cap);
        }
        break;
      }
      case TierKind::kDecreasing: {
        // support {(t, top - t*h) : t in [0,1]}
        if (y > base) {
          const double t_min = std::max(0.0, std::min(1.0, (top - y) / tier.height));
          mass += tier.height * std::max(0.0, x - t_min);
        }
        break;
      }
    }
    base = top;
  }
  return mass;
}

inline double measure_box(const GridPermuton& gamma, double x, double y) {
  if (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0) {
    throw std::invalid_argument("invalid-argument: box corner outside unit square");
  }
  const std::size_t d = gamma.dimension();
  const double cell = 1.0 / static_cast<double>(d);
  double mass = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double y_frac =
        std::max(0.0, std::min(y - static_cast<double>(i) * cell, cell)) / cell;
    if (y_frac == 0.0) continue;
    for (std::size_t j = 0; j < d; ++j) {
      const double x_frac =
          std::max(0.0, std::min(x - static_cast<double>(j) * cell, cell)) / cell;
      if (x_frac == 0.0) continue;
      mass += gamma.cells()[i][j] * x_frac * y_frac;
    }
  }
  return mass;
}

// Mass of the vertical strip [a,b] x [0,h].
inline double strip_mass_below(const TieredPermuton& gamma, double a, double b, double h) {
  return measure_box(gamma, b, h) - measure_box(gamma, a, h);
}

// Infimum h with strip mass >= (b-a)*y, by bisection on the monotone map.
inline double solve_strip_height(const TieredPermuton& gamma, double a, double b, double y) {
  const double target = (b - a) * y;
  double lo = 0.0;
  double hi = 1.0;
  for (int iter = 0; iter < 80; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (strip_mass_below(gamma, a, b, mid) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

// Box measure of the rescaled strip: the strip [a,b] blown up to a full
// permuton. For tiered permutons this reproduces the original measure.
inline double restricted_box_measure(const TieredPermuton& gamma, double a, double b, double x,
                                     double y) {
  const double h = solve_strip_height(gamma, a, b, y);
  return strip_mass_below(gamma, a, a + x * (b - a), h) / (b - a);
}

// Restriction of a tiered permuton to the vertical strip [a,b], rescaled back
// to a permuton. Each tier keeps its height and orientation, so the result
// equals the input; the construction verifies that tier by tier.
inline TieredPermuton restrict_strip(const TieredPermuton& gamma, double a, double b) {
  if (!(0.0 <= a && a < b && b <= 1.0)) {
    throw std::invalid_argument("invalid-argument: strip interval must satisfy 0 <= a < b <= 1");
  }
  std::vector<Tier> restricted;
  restricted.reserve(gamma.tiers().size());
  double base = 0.0;
  for (const Tier& tier : gamma.tiers()) {
    // mass of the tier inside the strip; every tier kind carries mass
    // proportional to the strip width
    const double strip_mass = strip_mass_below(gamma, a, b, base + tier.height) -
                              strip_mass_below(gamma, a, b, base);
    // rescaling by the strip width restores the height; a diagonal segment
    // stretches to the full diagonal of its tier, a uniform patch stays uniform
    restricted.push_back(Tier{strip_mass / (b - a), tier.kind});
    base += tier.height;
  }
  TieredPermuton result = TieredPermuton::from_tiers(std::move(restricted));
  const auto& got = result.tiers();
  const auto& want = gamma.tiers();
  for (std::size_t i = 0; i < want.size(); ++i) {
    if (got[i].kind != want[i].kind || std::fabs(got[i].height - want[i].height) > 1e-12) {
      throw std::logic_error("strip restriction must reproduce the tier structure");
    }
  }
  return result;
}

// Monte Carlo pattern density of a permuton with Hoeffding half-width.
inline DensityEstimate estimate_pattern_density(const Permuton& gamma,
                                                const Permutation& pattern,
                                                std::int64_t samples, double confidence,
                                                const SeedStream& stream) {
  if (samples < 1) throw std::invalid_argument("invalid-argument: samples must be >= 1");
  const Value k = pattern.length();
  std::int64_t hits = 0;
  std::int64_t done = 0;
  for (std::int64_t chunk = 0; done < samples; ++chunk) {
    Rng rng = stream.derive(static_cast<std::uint64_t>(chunk)).make_rng();
    const std::int64_t batch = std::min<std::int64_t>(4096, samples - done);
    for (std::int64_t s = 0; s < batch; ++s) {
      if (sample_permutation(gamma, k, rng) == pattern) ++hits;
    }
    done += batch;
  }
  return DensityEstimate::monte_carlo(static_cast<double>(hits) / static_cast<double>(samples),
                                      samples, confidence);
}

// Shared-sample estimates over all of S_k; the values sum to 1.
inline std::map<Permutation, DensityEstimate> estimate_pattern_density_vector(
    const Permuton& gamma, Value k, std::int64_t samples, double confidence,
    const SeedStream& stream) {
  if (samples < 1) throw std::invalid_argument("invalid-argument: samples must be >= 1");
  std::map<Permutation, std::int64_t> counts;
  std::int64_t done = 0;
  for (std::int64_t chunk = 0; done < samples; ++chunk) {
    Rng rng = stream.derive(static_cast<std::uint64_t>(chunk)).make_rng();
    const std::int64_t batch = std::min<std::int64_t>(4096, samples - done);
    for (std::int64_t s = 0; s < batch; ++s) {
      ++counts[sample_permutation(gamma, k, rng)];
    }
    done += batch;
  }
  std::map<Permutation, DensityEstimate> out;
  for (const Permutation& pat : all_patterns(k)) {
    const auto it = counts.find(pat);
    const std::int64_t hits = it == counts.end() ? 0 : it->second;
    out.emplace(pat, DensityEstimate::monte_carlo(
                         static_cast<double>(hits) / static_cast<double>(samples), samples,
                         confidence));
  }
  return out;
}

// JSON descriptors:
//   {"type":"tiered","tiers":[{"height":h,"kind":"inc|dec|uniform"},...]}
//   {"type":"grid","cells":[[...],...]}
//   {"type":"v"}
//   {"type":"vector","v":[1,1,-1]}
inline Permuton parse_permuton(const nlohmann::json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "tiered") {
    std::vector<Tier> tiers;
    for (const auto& tj : j.at("tiers")) {
      const std::string kind = tj.at("kind").get<std::string>();
      TierKind tk;
      if (kind == "inc") {
        tk = TierKind::kIncreasing;
      } else if (kind == "dec") {
        tk = TierKind::kDecreasing;
      } else if (kind == "uniform") {
        tk = TierKind::kUniform;
      } else {
        throw std::invalid_argument("invalid-argument: unknown tier kind '" + kind + "'");
      }
      tiers.push_back(Tier{tj.at("height").get<double>(), tk});
    }
    return TieredPermuton::from_tiers(std::move(tiers));
  }
  if (type == "grid") {
    return GridPermuton::from_cells(j.at("cells").get<std::vector<std::vector<double>>>());
  }
  if (type == "v") return VPermuton{};
  if (type == "vector") {
    return tiered_from_vector(GridVector::from_entries(j.at("v").get<std::vector<int>>()));
  }
  throw std::invalid_argument("invalid-argument: unknown permuton type '" + type + "'");
}

inline nlohmann::json permuton_to_json(const Permuton& gamma) {
  nlohmann::json j;
  if (const auto* tiered = std::get_if<TieredPermuton>(&gamma)) {
    j["type"] = "tiered";
    nlohmann::json tiers = nlohmann::json::array();
    for (const Tier& t : tiered->tiers()) {
      const char* kind = t.kind == TierKind::kIncreasing   ? "inc"
                         : t.kind == TierKind::kDecreasing ? "dec"
                                                           : "uniform";
      tiers.push_back({{"height", t.height}, {"kind", kind}});
    }
    j["tiers"] = tiers;
  } else if (const auto* grid = std::get_if<GridPermuton>(&gamma)) {
    j["type"] = "grid";
    j["cells"] = grid->cells();
  } else {
    j["type"] = "v";
  }
  return j;
}

}  // namespace permlab
