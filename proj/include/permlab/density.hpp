#pragma once
// Density results: a single exact or Monte Carlo estimate, and truncated
// pattern-density vectors.

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "permlab/permutation.hpp"

namespace permlab {

// Distribution-free two-sided confidence half-width for a mean of [0,1]
// samples: P(|estimate - truth| >= hw) <= 1 - confidence.
inline double hoeffding_half_width(std::int64_t samples, double confidence) {
  if (samples < 1) throw std::invalid_argument("invalid-argument: samples must be >= 1");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw std::invalid_argument("invalid-argument: confidence must lie in (0,1)");
  }
  return std::sqrt(std::log(2.0 / (1.0 - confidence)) / (2.0 * static_cast<double>(samples)));
}

struct DensityEstimate {
  double value = 0.0;
  std::int64_t samples = 1;  // 1 for exact results
  double half_width = 0.0;
  double confidence = 1.0;
  bool exact = true;

  static DensityEstimate exact_value(double v) { return DensityEstimate{v, 1, 0.0, 1.0, true}; }

  static DensityEstimate monte_carlo(double v, std::int64_t samples, double confidence) {
    return DensityEstimate{v, samples, hoeffding_half_width(samples, confidence), confidence,
                           false};
  }

  nlohmann::json to_json() const {
    return nlohmann::json{{"value", value},
                          {"samples", samples},
                          {"half_width", half_width},
                          {"confidence", confidence},
                          {"exact", exact}};
  }

  static DensityEstimate from_json(const nlohmann::json& j) {
    DensityEstimate e;
    e.value = j.at("value").get<double>();
    e.samples = j.at("samples").get<std::int64_t>();
    e.half_width = j.at("half_width").get<double>();
    e.confidence = j.at("confidence").get<double>();
    e.exact = j.at("exact").get<bool>();
    return e;
  }
};

// Truncated limit vector: one entry per pattern up to max_len.
struct DensityVector {
  Value max_len = 2;
  std::map<Permutation, double> entries;

  // For every k <= max_len whose pattern set is fully present, the entries
  // must sum to 1 within `tol`.
  void validate(double tol = 1e-9) const {
    if (max_len < 2) throw std::invalid_argument("invalid-argument: max_len must be >= 2");
    for (Value k = 1; k <= max_len; ++k) {
      double sum = 0.0;
      std::size_t present = 0;
      for (const auto& [pat, val] : entries) {
        if (pat.length() != k) continue;
        if (val < -tol || val > 1.0 + tol) {
          throw std::invalid_argument("invalid-argument: density outside [0,1]");
        }
        sum += val;
        ++present;
      }
      std::size_t expected = 1;
      for (Value i = 2; i <= k; ++i) expected *= static_cast<std::size_t>(i);
      if (present == expected && present > 0 && std::fabs(sum - 1.0) > tol) {
        throw std::invalid_argument("invalid-argument: complete level does not sum to 1");
      }
    }
  }
};

inline DensityVector density_vector_from_estimates(
    Value max_len, const std::map<Permutation, DensityEstimate>& estimates) {
  DensityVector v;
  v.max_len = max_len;
  for (const auto& [pat, est] : estimates) v.entries.emplace(pat, est.value);
  return v;
}

// Largest per-entry difference over patterns present in both vectors.
inline double linf_distance(const std::map<Permutation, DensityEstimate>& a,
                            const std::map<Permutation, DensityEstimate>& b) {
  double worst = 0.0;
  for (const auto& [pat, est] : a) {
    auto it = b.find(pat);
    if (it != b.end()) worst = std::max(worst, std::fabs(est.value - it->second.value));
  }
  return worst;
}

}  // namespace permlab
