#pragma once
// Mechanized sequence constructions: scale-down and scale-up steps, scale
// retargeting, every-length padding (scale and local), the multi-scale
// assembly by iterated substitution, and the box-product pairing that drives
// the two-direction assembly.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "permlab/bigint.hpp"
#include "permlab/component.hpp"
#include "permlab/permutation.hpp"
#include "permlab/scaling.hpp"

namespace permlab {

enum class FillerRule { kIdentity, kDecreasing };

inline Permutation make_filler(FillerRule rule, Value n) {
  return rule == FillerRule::kIdentity ? Permutation::identity(n) : Permutation::decreasing(n);
}

inline FillerRule parse_filler_rule(const std::string& text) {
  if (text == "identity") return FillerRule::kIdentity;
  if (text == "decreasing") return FillerRule::kDecreasing;
  throw std::invalid_argument("invalid-argument: unknown filler rule '" + text + "'");
}

inline std::string filler_rule_name(FillerRule rule) {
  return rule == FillerRule::kIdentity ? "identity" : "decreasing";
}

struct ScaleDownResult {
  Permutation perm;
  std::int64_t copies;
};

// Direct sum of ceil(C(u)) copies of sigma, moving its densities from scale f
// to the dominated scale f_down.
inline ScaleDownResult scale_down_step(const Permutation& sigma, const ScalingFunction& f,
                                       const ScalingFunction& f_down) {
  const Value u = sigma.length();
  if (u < static_cast<Value>(ScalingFunction::kMinArgument)) {
    throw std::invalid_argument("invalid-argument: component too short for a scale step");
  }
  const double factor = scale_down_factor(f, f_down, static_cast<double>(u));
  const std::int64_t copies = std::max<std::int64_t>(1, detail::eps_ceil(factor));
  return ScaleDownResult{direct_sum_power(sigma, copies), copies};
}

struct ScaleUpResult {
  Permutation perm;
  std::int64_t block;
};

// Inflation sigma[phi] with |phi| = ceil(D(u)), moving its densities from
// scale f to the dominating scale f_up.
inline ScaleUpResult scale_up_step(const Permutation& sigma, const ScalingFunction& f,
                                   const ScalingFunction& f_up, FillerRule filler) {
  const Value u = sigma.length();
  if (u < static_cast<Value>(ScalingFunction::kMinArgument)) {
    throw std::invalid_argument("invalid-argument: component too short for a scale step");
  }
  const double factor = scale_up_factor(f, f_up, static_cast<double>(u));
  const std::int64_t block = std::max<std::int64_t>(1, detail::eps_ceil(factor));
  return ScaleUpResult{substitute(sigma, make_filler(filler, block)), block};
}

// Term-wise retargeting of a sequence from scale `from` to scale `to`. The
// family is totally ordered, so the dispatch is two-way; equivalent scales
// return the sequence unchanged. Terms shorter than the evaluation floor pass
// through untouched.
inline ComponentSequence retarget_scale(const ComponentSequence& seq, const ScalingFunction& from,
                                        const ScalingFunction& to,
                                        FillerRule filler = FillerRule::kIdentity) {
  const DominationOrder order = domination_order(to, from);
  if (order == DominationOrder::kEquivalent) return seq;

  nlohmann::json desc = {{"type", "retarget"},
                         {"inner", seq.descriptor()},
                         {"from", from.to_string()},
                         {"to", to.to_string()},
                         {"filler", filler_rule_name(filler)}};
  const double floor = ScalingFunction::kMinArgument;
  if (order == DominationOrder::kFirstSmaller) {
    // to << from: direct-sum copies
    auto gen = [seq, from, to](Value j) {
      const Permutation sigma = seq.term(j);
      if (sigma.length() < static_cast<Value>(ScalingFunction::kMinArgument)) return sigma;
      return scale_down_step(sigma, from, to).perm;
    };
    auto len = [seq, from, to, floor](Value j) {
      const Value u = seq.term_length(j);
      if (u < static_cast<Value>(floor)) return u;
      const std::int64_t copies = std::max<std::int64_t>(
          1, detail::eps_ceil(scale_down_factor(from, to, static_cast<double>(u))));
      return u * copies;
    };
    return ComponentSequence(std::move(gen), std::move(len), std::move(desc), false);
  }
  // from << to: inflation
  auto gen = [seq, from, to, filler](Value j) {
    const Permutation sigma = seq.term(j);
    if (sigma.length() < static_cast<Value>(ScalingFunction::kMinArgument)) return sigma;
    return scale_up_step(sigma, from, to, filler).perm;
  };
  auto len = [seq, from, to, floor](Value j) {
    const Value u = seq.term_length(j);
    if (u < static_cast<Value>(floor)) return u;
    const std::int64_t block = std::max<std::int64_t>(
        1, detail::eps_ceil(scale_up_factor(from, to, static_cast<double>(u))));
    return u * block;
  };
  return ComponentSequence(std::move(gen), std::move(len), std::move(desc), false);
}

namespace detail {

// Largest j >= 1 with pred(j) true, where pred is monotone (true then false).
// Returns 0 when pred(1) is false.
template <typename Pred>
Value last_true_index(Value hi_start, const Pred& pred) {
  if (!pred(1)) return 0;
  Value lo = 1;
  Value hi = std::max<Value>(2, hi_start);
  while (pred(hi)) {
    lo = hi;
    if (hi > (std::int64_t{1} << 62) / 2) break;
    hi *= 2;
  }
  while (lo < hi) {
    const Value mid = lo + (hi - lo + 1) / 2;
    if (pred(mid)) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo;
}

}  // namespace detail

// Length-exact term at scale f: pad ++ c copies of term(j)[phi_d], where j is
// the largest usable index with term_length(j)^2 <= f(target_length). Below
// the first usable index the filler permutation of the requested length is
// returned.
inline Permutation every_length(const ComponentSequence& seq, const ScalingFunction& f,
                                Value target_length, FillerRule filler = FillerRule::kIdentity) {
  if (target_length < 1) {
    throw std::invalid_argument("invalid-argument: target length must be >= 1");
  }
  if (!f.is_proper()) {
    throw std::invalid_argument("invalid-argument: every_length needs a proper scaling function");
  }
  if (target_length < static_cast<Value>(ScalingFunction::kMinArgument)) {
    return make_filler(filler, target_length);
  }
  const double f_total = f.evaluate(static_cast<double>(target_length));
  const Value j = detail::last_true_index(
      static_cast<Value>(std::sqrt(f_total)) + 2, [&seq, f_total](Value idx) {
        const double u = static_cast<double>(seq.term_length(idx));
        return u * u <= f_total;
      });
  if (j == 0) return make_filler(filler, target_length);
  const Value u = seq.term_length(j);
  if (u < static_cast<Value>(ScalingFunction::kMinArgument)) {
    return make_filler(filler, target_length);
  }

  const double f_u = f.evaluate(static_cast<double>(u));
  const double block_factor = f_total / f_u;
  const double copy_factor =
      (static_cast<double>(target_length) / f_total) * (f_u / static_cast<double>(u));
  std::int64_t block = detail::eps_floor(block_factor);
  std::int64_t copies = detail::eps_floor(copy_factor);
  if (block < 1 || copies < 1) return make_filler(filler, target_length);
  while (copies * block * u > target_length) {
    if (copies > 1) {
      --copies;
    } else if (block > 1) {
      --block;
    } else {
      return make_filler(filler, target_length);
    }
  }
  const Value pad = target_length - copies * block * u;

  const Permutation body =
      direct_sum_power(substitute(seq.term(j), make_filler(filler, block)), copies);
  const Permutation out = pad > 0 ? direct_sum(make_filler(filler, pad), body) : body;
  if (out.length() != target_length) {
    throw std::logic_error("every_length produced the wrong length");
  }
  return out;
}

// Length-exact term preserving local (consecutive) densities: pad ++ c copies
// of term(j) with j the largest index whose term length squared fits.
inline Permutation every_length_local(const ComponentSequence& seq, Value target_length,
                                      FillerRule filler = FillerRule::kIdentity) {
  if (target_length < 1) {
    throw std::invalid_argument("invalid-argument: target length must be >= 1");
  }
  const Value j = detail::last_true_index(
      static_cast<Value>(std::sqrt(static_cast<double>(target_length))) + 2,
      [&seq, target_length](Value idx) {
        const Value u = seq.term_length(idx);
        return u <= target_length / u;
      });
  if (j == 0) return make_filler(filler, target_length);
  const Value u = seq.term_length(j);
  const Value copies = target_length / u;
  const Value pad = target_length - copies * u;
  const Permutation body = direct_sum_power(seq.term(j), copies);
  return pad > 0 ? direct_sum(make_filler(filler, pad), body) : body;
}

inline ComponentSequence every_length_sequence(const ComponentSequence& seq,
                                               const ScalingFunction& f,
                                               FillerRule filler = FillerRule::kIdentity) {
  nlohmann::json desc = {{"type", "every_length"},
                         {"inner", seq.descriptor()},
                         {"scale", f.to_string()},
                         {"filler", filler_rule_name(filler)}};
  auto gen = [seq, f, filler](Value j) { return every_length(seq, f, j, filler); };
  auto len = [](Value j) { return j; };
  return ComponentSequence(std::move(gen), std::move(len), std::move(desc), true);
}

inline ComponentSequence every_length_local_sequence(const ComponentSequence& seq,
                                                     FillerRule filler = FillerRule::kIdentity) {
  nlohmann::json desc = {{"type", "every_length_local"},
                         {"inner", seq.descriptor()},
                         {"filler", filler_rule_name(filler)}};
  auto gen = [seq, filler](Value j) { return every_length_local(seq, j, filler); };
  auto len = [](Value j) { return j; };
  return ComponentSequence(std::move(gen), std::move(len), std::move(desc), true);
}

// The two-direction pair term: sigma_j boxed with the inverse of tau_j. Its
// vertical strips are copies of sigma_j and the strips of its inverse are
// copies of tau_j.
inline Permutation box_pair(const ComponentSequence& sigma_seq, const ComponentSequence& tau_seq,
                            Value j) {
  if (j < 1) throw std::invalid_argument("invalid-argument: pair index must be >= 1");
  return box_product(sigma_seq.term(j), inverse(tau_seq.term(j)));
}

// Every-length wrapper around box_pair: term(M) = pad ++ box_pair(j) with the
// largest j whose pair length fits in M. Padding by direct sum keeps the
// forward/inverse structure, since inversion distributes over direct sums.
inline ComponentSequence paired_component(const ComponentSequence& fwd,
                                          const ComponentSequence& inv,
                                          FillerRule filler = FillerRule::kIdentity) {
  nlohmann::json desc = {{"type", "box_pair"},
                         {"fwd", fwd.descriptor()},
                         {"inv", inv.descriptor()},
                         {"filler", filler_rule_name(filler)}};
  auto gen = [fwd, inv, filler](Value target) {
    const Value j = detail::last_true_index(
        static_cast<Value>(std::sqrt(static_cast<double>(target))) + 2,
        [&fwd, &inv, target](Value idx) {
          const Value len = fwd.term_length(idx) * inv.term_length(idx);
          return len <= target;
        });
    if (j == 0) return make_filler(filler, target);
    const Permutation pair = box_pair(fwd, inv, j);
    const Value pad = target - pair.length();
    return pad > 0 ? direct_sum(make_filler(filler, pad), pair) : pair;
  };
  auto len = [](Value j) { return j; };
  return ComponentSequence(std::move(gen), std::move(len), std::move(desc), true);
}

struct ScaleTarget {
  ScalingFunction scale;
  ComponentSequence component;
};

struct AssemblyOptions {
  FillerRule filler = FillerRule::kIdentity;
  std::int64_t length_cap = 10'000'000;
  // Evaluate gap sizes at the largest base point whose projected length stays
  // under the cap (the threshold alone yields degenerate block sizes for
  // small m); switch off to reproduce the minimal assembly.
  bool grow_to_cap = true;
};

struct AssemblyLevel {
  int level;
  std::string scale_text;
  double gap_at_base;
  std::int64_t block;  // component term length used at this level
  std::string component_type;
};

struct AssemblyReport {
  int m = 0;
  std::int64_t threshold = 0;   // least admissible base point
  std::int64_t base_point = 0;  // where gap sizes were evaluated
  std::int64_t length_cap = 0;
  bool materialized = false;
  BigInt total_length;
  std::vector<AssemblyLevel> levels;

  nlohmann::json to_json() const {
    nlohmann::json lv = nlohmann::json::array();
    for (const AssemblyLevel& l : levels) {
      lv.push_back({{"level", l.level},
                    {"scale", l.scale_text},
                    {"gap_at_base", l.gap_at_base},
                    {"block", l.block},
                    {"component", l.component_type}});
    }
    return nlohmann::json{{"m", m},
                          {"threshold", threshold},
                          {"base_point", base_point},
                          {"length_cap", length_cap},
                          {"materialized", materialized},
                          {"total_length", total_length.str()},
                          {"levels", lv}};
  }
};

struct AssemblyResult {
  std::optional<Permutation> perm;
  AssemblyReport report;
};

// Iterated-substitution assembly over the first m targets: global component
// on top, one level per scale ordered by domination, local component at the
// bottom. Level block sizes are the gap sizes between consecutive
// half-exponent levels, evaluated at the base point.
inline AssemblyResult multi_scale_assemble(const std::vector<ScaleTarget>& targets,
                                           const ComponentSequence& global,
                                           const ComponentSequence& local, int m,
                                           const AssemblyOptions& options = {}) {
  if (m < 1 || static_cast<std::size_t>(m) > targets.size()) {
    throw std::invalid_argument("invalid-argument: m must satisfy 1 <= m <= |targets|");
  }
  if (options.length_cap < 1) {
    throw std::invalid_argument("invalid-argument: length cap must be positive");
  }
  std::vector<const ScaleTarget*> sorted;
  for (int t = 0; t < m; ++t) {
    if (!targets[static_cast<std::size_t>(t)].scale.is_proper()) {
      throw std::invalid_argument("invalid-argument: target scales must be proper");
    }
    sorted.push_back(&targets[static_cast<std::size_t>(t)]);
  }
  std::sort(sorted.begin(), sorted.end(), [](const ScaleTarget* a, const ScaleTarget* b) {
    return domination_order(a->scale, b->scale) == DominationOrder::kSecondSmaller;
  });
  std::vector<ScalingFunction> scales;
  for (const ScaleTarget* t : sorted) scales.push_back(t->scale);
  require_strictly_descending(scales);  // also rejects equivalent pairs

  const std::int64_t threshold = find_threshold(scales, m);

  // level scale sequence f^0 = n, f^1..f^m, f^{m+1} = 1 and the half-exponent
  // levels h_l between them
  std::vector<ScalingFunction> f_levels;
  f_levels.push_back(ScalingFunction::sentinel_n());
  f_levels.insert(f_levels.end(), scales.begin(), scales.end());
  f_levels.push_back(ScalingFunction::unit());
  std::vector<ScalingFunction> h_levels;
  h_levels.push_back(ScalingFunction::sentinel_n());  // h_0 = n
  for (std::size_t l = 1; l < f_levels.size(); ++l) {
    h_levels.push_back(geometric_mean(f_levels[l - 1], f_levels[l]));
  }
  h_levels.push_back(ScalingFunction::unit());  // h_{m+2} = 1

  const auto gap = [&h_levels](std::size_t level, double n) {
    return h_levels[level].evaluate_unclamped(n) / h_levels[level + 1].evaluate_unclamped(n);
  };
  const std::size_t level_count = static_cast<std::size_t>(m) + 2;  // levels 0 .. m+1
  const auto project_length = [&](std::int64_t n) {
    BigInt product = 1;
    for (std::size_t l = 0; l < level_count; ++l) {
      product *= detail::eps_ceil(gap(l, static_cast<double>(n)));
    }
    return product;
  };

  std::int64_t base = threshold;
  if (options.grow_to_cap && project_length(threshold) <= options.length_cap) {
    std::int64_t lo = threshold;
    std::int64_t hi = std::max(threshold, options.length_cap);
    while (lo < hi) {
      const std::int64_t mid = lo + (hi - lo + 1) / 2;
      if (project_length(mid) <= options.length_cap) {
        lo = mid;
      } else {
        hi = mid - 1;
      }
    }
    base = lo;
  }

  AssemblyReport report;
  report.m = m;
  report.threshold = threshold;
  report.base_point = base;
  report.length_cap = options.length_cap;
  report.total_length = 1;

  std::vector<std::int64_t> blocks(level_count);
  for (std::size_t l = 0; l < level_count; ++l) {
    blocks[l] = detail::eps_ceil(gap(l, static_cast<double>(base)));
    report.total_length *= blocks[l];
    AssemblyLevel lvl;
    lvl.level = static_cast<int>(l);
    lvl.gap_at_base = gap(l, static_cast<double>(base));
    lvl.block = blocks[l];
    if (l == 0) {
      lvl.scale_text = "n";
      lvl.component_type = global.descriptor().value("type", "unknown");
    } else if (l == level_count - 1) {
      lvl.scale_text = "1";
      lvl.component_type = local.descriptor().value("type", "unknown");
    } else {
      lvl.scale_text = sorted[l - 1]->scale.to_string();
      lvl.component_type = sorted[l - 1]->component.descriptor().value("type", "unknown");
    }
    report.levels.push_back(std::move(lvl));
  }
  report.materialized = report.total_length <= options.length_cap;

  AssemblyResult result;
  if (report.materialized) {
    const auto level_component = [&](std::size_t l) -> const ComponentSequence& {
      if (l == 0) return global;
      if (l == level_count - 1) return local;
      return sorted[l - 1]->component;
    };
    Permutation assembled = level_component(0).term(blocks[0]);
    if (assembled.length() != blocks[0]) {
      throw std::invalid_argument(
          "invalid-argument: level component does not honor the requested length");
    }
    for (std::size_t l = 1; l < level_count; ++l) {
      const Permutation lambda = level_component(l).term(blocks[l]);
      if (lambda.length() != blocks[l]) {
        throw std::invalid_argument(
            "invalid-argument: level component does not honor the requested length");
      }
      assembled = substitute(assembled, lambda);
    }
    if (BigInt(assembled.length()) != report.total_length) {
      throw std::logic_error("assembly bookkeeping mismatch");
    }
    result.perm = std::move(assembled);
  }
  result.report = std::move(report);
  return result;
}

// Two-direction assembly: middle levels and the local level are box-product
// pairs, realizing the forward and inverse targets jointly. Inversion
// distributes over direct sum and substitution, so the inverse of the output
// carries the mirrored structure.
inline AssemblyResult two_direction_assemble(const std::vector<ScaleTarget>& targets_fwd,
                                             const std::vector<ScaleTarget>& targets_inv,
                                             const ComponentSequence& global,
                                             const ComponentSequence& local_fwd,
                                             const ComponentSequence& local_inv, int m,
                                             const AssemblyOptions& options = {}) {
  if (m < 1 || static_cast<std::size_t>(m) > targets_fwd.size()) {
    throw std::invalid_argument("invalid-argument: m must satisfy 1 <= m <= |targets|");
  }
  std::vector<ScaleTarget> paired;
  for (int t = 0; t < m; ++t) {
    const ScaleTarget& fwd = targets_fwd[static_cast<std::size_t>(t)];
    const ScaleTarget* partner = nullptr;
    for (const ScaleTarget& inv : targets_inv) {
      if (domination_order(fwd.scale, inv.scale) == DominationOrder::kEquivalent) {
        partner = &inv;
        break;
      }
    }
    if (partner == nullptr) {
      throw std::invalid_argument(
          "invalid-argument: forward and inverse targets must share the same scales");
    }
    paired.push_back(ScaleTarget{
        fwd.scale, paired_component(fwd.component, partner->component, options.filler)});
  }
  return multi_scale_assemble(paired, global,
                              paired_component(local_fwd, local_inv, options.filler), m,
                              options);
}

// Component descriptors including the derived kinds.
inline ComponentSequence component_from_json(const nlohmann::json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "permuton" || type == "periodic" || type == "explicit") {
    return ComponentSequence::from_json(j);
  }
  const FillerRule filler = parse_filler_rule(j.value("filler", "identity"));
  if (type == "retarget") {
    return retarget_scale(component_from_json(j.at("inner")),
                          ScalingFunction::parse(j.at("from").get<std::string>()),
                          ScalingFunction::parse(j.at("to").get<std::string>()), filler);
  }
  if (type == "every_length") {
    return every_length_sequence(component_from_json(j.at("inner")),
                                 ScalingFunction::parse(j.at("scale").get<std::string>()),
                                 filler);
  }
  if (type == "every_length_local") {
    return every_length_local_sequence(component_from_json(j.at("inner")), filler);
  }
  if (type == "box_pair") {
    return paired_component(component_from_json(j.at("fwd")),
                            component_from_json(j.at("inv")), filler);
  }
  throw std::invalid_argument("invalid-argument: unknown component type '" + type + "'");
}

// Construction descriptors:
//   {"kind":"multi_scale","m":2,"targets":[{"scale":...,"component":...},...],
//    "global":...,"local":...,"filler":"identity","length_cap":10000000}
//   {"kind":"two_direction","m":1,"targets_fwd":[...],"targets_inv":[...],
//    "global":...,"local_fwd":...,"local_inv":...,...}
inline AssemblyResult run_construction(const nlohmann::json& desc, int m_override = 0) {
  const std::string kind = desc.at("kind").get<std::string>();
  AssemblyOptions options;
  options.filler = parse_filler_rule(desc.value("filler", "identity"));
  options.length_cap = desc.value("length_cap", std::int64_t{10'000'000});
  options.grow_to_cap = desc.value("grow_to_cap", true);
  const int m = m_override > 0 ? m_override : desc.at("m").get<int>();

  const auto parse_targets = [](const nlohmann::json& arr) {
    std::vector<ScaleTarget> targets;
    for (const auto& t : arr) {
      targets.push_back(ScaleTarget{ScalingFunction::parse(t.at("scale").get<std::string>()),
                                    component_from_json(t.at("component"))});
    }
    return targets;
  };

  if (kind == "multi_scale") {
    return multi_scale_assemble(parse_targets(desc.at("targets")),
                                component_from_json(desc.at("global")),
                                component_from_json(desc.at("local")), m, options);
  }
  if (kind == "two_direction") {
    return two_direction_assemble(parse_targets(desc.at("targets_fwd")),
                                  parse_targets(desc.at("targets_inv")),
                                  component_from_json(desc.at("global")),
                                  component_from_json(desc.at("local_fwd")),
                                  component_from_json(desc.at("local_inv")), m, options);
  }
  throw std::invalid_argument("invalid-argument: unknown construction kind '" + kind + "'");
}

}  // namespace permlab
