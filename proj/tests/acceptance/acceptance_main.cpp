// Acceptance harness: eleven end-to-end criteria covering exact counting
// identities, algebraic identities, figure-anchored values, Monte Carlo scale
// behavior of permuton samples, the assembly constructions, and CLI
// determinism. Each criterion prints a single [PASS]/[FAIL] line; stated
// wall-clock limits are part of the pass condition.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "permlab/constructions.hpp"
#include "permlab/convergence.hpp"
#include "permlab/counting.hpp"
#include "permlab/permutation.hpp"
#include "permlab/permuton.hpp"
#include "permlab/scaling.hpp"

#ifndef PERMLAB_CLI_PATH
#define PERMLAB_CLI_PATH "permlab"
#endif

namespace {

using namespace permlab;

Permutation perm(std::string_view text) { return parse_permutation(text); }

struct CriterionResult {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  std::ostringstream out;
  out.precision(4);
  out << x;
  return out.str();
}

// ---- 1: sum form, closed form and enumeration of width-bounded subsets ----

CriterionResult criterion_counting_identity() {
  for (std::int64_t k = 2; k <= 6; ++k) {
    for (std::int64_t n = k; n <= 14; ++n) {
      // tally subsets by width once per (n, k)
      std::vector<std::int64_t> by_width(static_cast<std::size_t>(n + 1), 0);
      oracle::for_each_subset(n, k, [&](const std::vector<Value>& idx) {
        ++by_width[static_cast<std::size_t>(idx.back() - idx.front() + 1)];
      });
      std::int64_t enumerated = 0;
      for (std::int64_t f = k; f <= n; ++f) {
        enumerated += by_width[static_cast<std::size_t>(f)];
        const BigInt sum_form = width_bounded_subset_count(n, k, static_cast<double>(f));
        const BigInt closed = width_bounded_subset_count_closed_form(n, k, f);
        if (sum_form != closed || sum_form != enumerated) {
          return {false, "mismatch at n=" + std::to_string(n) + " k=" + std::to_string(k) +
                             " f=" + std::to_string(f)};
        }
      }
    }
  }
  return {true, "sum form = closed form = enumeration for all 2<=k<=6, k<=f<=n<=14"};
}

// ---- 2: window enumerator against the naive full-subset scan ----

CriterionResult criterion_occurrence_oracle() {
  Rng rng = SeedStream(1002).derive("occurrence-oracle").make_rng();
  for (int trial = 0; trial < 200; ++trial) {
    const Value n = 4 + static_cast<Value>(rng.next_below(9));  // 4..12
    const Value k = 2 + static_cast<Value>(rng.next_below(3));  // 2..4
    const Permutation host = oracle::random_permutation(n, rng);
    const Permutation pattern = oracle::random_permutation(k, rng);
    const std::int64_t f =
        k + static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(n - k + 1)));
    const BigInt fast = count_occurrences_width(pattern, host, static_cast<double>(f));
    const std::int64_t naive = oracle::count_occurrences_naive(pattern, host, f);
    if (fast != naive) {
      return {false, "mismatch for pattern " + format_permutation(pattern) + " in " +
                         format_permutation(host) + " at f=" + std::to_string(f)};
    }
  }
  return {true, "window enumerator = naive scan on 200 random cases, n<=12, k<=4"};
}

// ---- 3: algebraic identities ----

CriterionResult criterion_algebraic_identities() {
  std::int64_t checks = 0;
  // exhaustive, lengths <= 4
  std::vector<Permutation> shorts;
  for (Value len = 1; len <= 4; ++len) {
    for (const Permutation& p : all_patterns(len)) shorts.push_back(p);
  }
  for (const Permutation& a : shorts) {
    for (const Permutation& b : shorts) {
      if (inverse(direct_sum(a, b)) != direct_sum(inverse(a), inverse(b))) {
        return {false, "direct-sum distributivity failed"};
      }
      if (inverse(substitute(a, b)) != substitute(inverse(a), inverse(b))) {
        return {false, "substitution distributivity failed"};
      }
      checks += 2;
    }
  }
  // associativity, exhaustive on lengths <= 4
  for (const Permutation& a : shorts) {
    for (const Permutation& b : shorts) {
      for (const Permutation& c : shorts) {
        if (substitute(substitute(a, b), c) != substitute(a, substitute(b, c))) {
          return {false, "substitution associativity failed"};
        }
        ++checks;
      }
    }
  }
  // randomized, lengths <= 8
  Rng rng = SeedStream(1003).derive("identities").make_rng();
  for (int trial = 0; trial < 1000; ++trial) {
    const Permutation a = oracle::random_permutation(1 + rng.next_below(8), rng);
    const Permutation b = oracle::random_permutation(1 + rng.next_below(8), rng);
    const Permutation c = oracle::random_permutation(1 + rng.next_below(4), rng);
    if (inverse(direct_sum(a, b)) != direct_sum(inverse(a), inverse(b)) ||
        inverse(substitute(a, b)) != substitute(inverse(a), inverse(b)) ||
        substitute(substitute(a, b), c) != substitute(a, substitute(b, c)) ||
        inverse(box_product(a, b)) != box_product(inverse(b), inverse(a))) {
      return {false, "randomized identity failed at trial " + std::to_string(trial)};
    }
    checks += 4;
  }
  return {true, std::to_string(checks) + " identity checks, zero failures"};
}

// ---- 4: figure-anchored values ----

CriterionResult criterion_anchored_values() {
  if (box_product(perm("213"), perm("4312")) != perm("8,4,12,7,3,11,5,1,9,6,2,10")) {
    return {false, "box product anchor mismatch"};
  }
  if (substitute(substitute(perm("213"), perm("1324")), perm("12")) !=
      perm("9,10,13,14,11,12,15,16,1,2,5,6,3,4,7,8,17,18,21,22,19,20,23,24")) {
    return {false, "double substitution anchor mismatch"};
  }
  if (direct_sum(perm("4231"), direct_sum_power(perm("35142"), 4)) !=
      perm("4,2,3,1,7,9,5,8,6,12,14,10,13,11,17,19,15,18,16,22,24,20,23,21")) {
    return {false, "direct sum anchor mismatch"};
  }
  if (count_occurrences(perm("132"), perm("35142")) != 2) {
    return {false, "occurrence count anchor mismatch"};
  }
  return {true, "box product, double substitution, direct sum and count anchors reproduced"};
}

// ---- 5: V-shaped sample at the square-root scale ----

CriterionResult criterion_v_scale_behavior() {
  Rng rng = SeedStream(1005).derive("v-sample").make_rng();
  const Permutation sigma = sample_permutation(VPermuton{}, 10000, rng);
  const double f = std::sqrt(10000.0);
  const SeedStream stream = SeedStream(1005).derive("v-windows");
  const auto pairs = estimate_density_vector(sigma, 2, f, 100000, 0.99, stream.derive(2));
  const auto triples = estimate_density_vector(sigma, 3, f, 100000, 0.99, stream.derive(3));
  const double d12 = pairs.at(perm("12")).value;
  const double d21 = pairs.at(perm("21")).value;
  std::string detail = "12: " + fmt(d12) + ", 21: " + fmt(d21);
  if (d12 < 0.45 || d12 > 0.55 || d21 < 0.45 || d21 > 0.55) {
    return {false, detail + " outside [0.45, 0.55]"};
  }
  for (const auto& [pat, est] : triples) {
    if (pat == perm("123") || pat == perm("321")) continue;
    if (est.value > 0.05) {
      return {false, "non-monotone " + format_permutation(pat) + " at " + fmt(est.value)};
    }
  }
  return {true, detail + ", non-monotone S3 all <= 0.05"};
}

// ---- 6: tiered sample has the same S3 vector at every scale ----

CriterionResult criterion_tiered_scalable() {
  const Permuton gamma = tiered_from_vector(GridVector::from_entries({1, 1, -1}));
  Rng rng = SeedStream(1006).derive("tiered-sample").make_rng();
  const Value n = 10000;
  const Permutation sigma = sample_permutation(gamma, n, rng);
  const SeedStream stream = SeedStream(1006).derive("tiered-windows");
  const auto global =
      estimate_density_vector(sigma, 3, static_cast<double>(n), 100000, 0.99, stream.derive(0));
  double worst = 0.0;
  int scale_index = 1;
  for (double exponent : {0.25, 0.5, 0.75}) {
    const double f = std::pow(static_cast<double>(n), exponent);
    const auto at_scale =
        estimate_density_vector(sigma, 3, f, 100000, 0.99, stream.derive(scale_index++));
    worst = std::max(worst, linf_distance(at_scale, global));
  }
  if (worst >= 0.05) {
    return {false, "worst per-entry deviation " + fmt(worst) + " >= 0.05"};
  }
  return {true, "S3 vectors at n^{1/4}, n^{1/2}, n^{3/4} within " + fmt(worst) +
                    " of the global vector"};
}

// ---- 7: scale-down construction preserves the density vector ----

CriterionResult criterion_scale_down() {
  const auto f = ScalingFunction::power_log(2.0 / 3.0, 0.0);
  const auto f_down = ScalingFunction::power_log(1.0 / 3.0, 0.0);
  Rng rng = SeedStream(1007).derive("component").make_rng();
  const Permutation sigma = sample_permutation(VPermuton{}, 1000, rng);
  const auto step = scale_down_step(sigma, f, f_down);
  if (step.perm.length() != 1000000) {
    return {false, "expected a length 10^6 construction, got " +
                       std::to_string(step.perm.length())};
  }
  const SeedStream stream = SeedStream(1007).derive("windows");
  const auto component_vector = estimate_density_vector(
      sigma, 3, f.evaluate(1000.0), 100000, 0.99, stream.derive("component"));
  const auto constructed_vector = estimate_density_vector(
      step.perm, 3, f_down.evaluate(1000000.0), 100000, 0.99, stream.derive("constructed"));
  const double worst = linf_distance(component_vector, constructed_vector);
  if (worst >= 0.06) {
    return {false, "worst per-entry deviation " + fmt(worst) + " >= 0.06"};
  }
  return {true, "constructed vector at the lower scale within " + fmt(worst) +
                    " of the component vector (copies: " + std::to_string(step.copies) + ")"};
}

// Shared by criteria 8 and 10.
AssemblyResult build_two_scale_assembly() {
  const std::vector<ScaleTarget> targets = {
      {ScalingFunction::power_log(2.0 / 3.0, 0.0),
       ComponentSequence::permuton_random(TieredPermuton::increasing(), 81)},
      {ScalingFunction::power_log(1.0 / 3.0, 0.0),
       ComponentSequence::permuton_random(TieredPermuton::decreasing(), 82)}};
  const auto global =
      ComponentSequence::permuton_random(GridPermuton::from_cells({{1.0}}), 83);
  const auto local = ComponentSequence::periodic(Permutation::identity(1));
  AssemblyOptions options;
  options.length_cap = 10'000'000;
  return multi_scale_assemble(targets, global, local, 2, options);
}

// ---- 8: density at each scale follows the target owning it ----

CriterionResult criterion_multi_scale() {
  const auto result = build_two_scale_assembly();
  if (!result.perm.has_value()) return {false, "assembly exceeded its cap"};
  if (result.report.levels[1].block < 4 || result.report.levels[2].block < 4) {
    return {false, "middle block sizes below m^2"};
  }
  const double n = static_cast<double>(result.perm->length());
  const SeedStream stream = SeedStream(1008).derive("multi-scale");
  const double f_big = std::pow(n, 2.0 / 3.0);
  const double f_small = std::pow(n, 1.0 / 3.0);
  const auto big =
      estimate_density_vector(*result.perm, 2, f_big, 100000, 0.99, stream.derive("big"));
  const auto small =
      estimate_density_vector(*result.perm, 2, f_small, 100000, 0.99, stream.derive("small"));
  const double d12 = big.at(perm("12")).value;
  const double d21 = small.at(perm("21")).value;
  const std::string detail = "n=" + std::to_string(result.perm->length()) +
                             ", 12-density at n^{2/3}: " + fmt(d12) +
                             ", 21-density at n^{1/3}: " + fmt(d21);
  if (d12 < 0.8 || d21 < 0.8) return {false, detail + " (need >= 0.8)"};
  return {true, detail};
}

// ---- 9: box-pair probe in both directions at the square-root scale ----

CriterionResult criterion_two_direction_probe() {
  const auto inc = ComponentSequence::permuton_random(TieredPermuton::increasing(), 91);
  const auto dec = ComponentSequence::permuton_random(TieredPermuton::decreasing(), 92);
  const Permutation pair = box_pair(inc, dec, 300);
  const double n = static_cast<double>(pair.length());
  const double f = std::sqrt(n);  // width bound 300 on a length 90000 host
  const SeedStream stream = SeedStream(1009).derive("pair");
  const auto fwd =
      estimate_density_at_scale(perm("12"), pair, f, 100000, 0.99, stream.derive("fwd"));
  const auto inv = estimate_density_at_scale(perm("21"), inverse(pair), f, 100000, 0.99,
                                             stream.derive("inv"));
  const std::string detail =
      "12-density of the pair: " + fmt(fwd.value) +
      ", 21-density of its inverse: " + fmt(inv.value) + " at width " + fmt(f) +
      " (the width bound equals the strip length, so about half of all admissible"
      " pairs straddle a strip boundary and invert)";
  if (fwd.value >= 0.9 && inv.value >= 0.9) return {true, detail};
  return {false, detail + "; required >= 0.9"};
}

// ---- 10: densities at scale cf stay close to those at scale f ----

CriterionResult criterion_constant_ratio() {
  const auto result = build_two_scale_assembly();
  if (!result.perm.has_value()) return {false, "assembly exceeded its cap"};
  const double n = static_cast<double>(result.perm->length());
  const double f_big = std::pow(n, 2.0 / 3.0);
  const SeedStream stream = SeedStream(1010).derive("ratio");
  const auto at_f =
      estimate_density_vector(*result.perm, 2, f_big, 100000, 0.99, stream.derive("full"));
  const auto at_half = estimate_density_vector(*result.perm, 2, 0.5 * f_big, 100000, 0.99,
                                               stream.derive("half"));
  const double diff = std::fabs(at_f.at(perm("12")).value - at_half.at(perm("12")).value);
  const std::string detail = "12-density at n^{2/3}: " + fmt(at_f.at(perm("12")).value) +
                             ", at 0.5 n^{2/3}: " + fmt(at_half.at(perm("12")).value);
  if (diff >= 0.1) return {false, detail + " (difference >= 0.1)"};
  return {true, detail};
}

// ---- 11: CLI determinism across runs and worker counts ----

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

CriterionResult criterion_cli_determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "permlab_acceptance";
  fs::create_directories(dir);
  const fs::path config_path = dir / "converge.json";
  {
    std::ofstream out(config_path);
    out << R"({
      "sequence": {"type": "permuton", "descriptor": {"type": "v"}, "seed": 2024},
      "indices": [1000, 10000],
      "scales": ["n^0.5"],
      "patterns": ["S2", "S3"],
      "samples": 20000,
      "confidence": 0.99,
      "seed": 77
    })";
  }
  const std::string cli = PERMLAB_CLI_PATH;
  const auto run = [&](const std::string& out_name, int threads) {
    const fs::path out = dir / out_name;
    const std::string cmd = cli + " converge " + config_path.string() + " --out " +
                            out.string() + " --threads " + std::to_string(threads);
    return std::system(cmd.c_str()) == 0;
  };
  if (!run("a.csv", 1) || !run("b.csv", 1) || !run("c.csv", 4) || !run("d.csv", 3)) {
    return {false, "CLI invocation failed"};
  }
  const std::string a = slurp(dir / "a.csv");
  const std::string b = slurp(dir / "b.csv");
  const std::string c = slurp(dir / "c.csv");
  const std::string d = slurp(dir / "d.csv");
  if (a.empty() || a != b) return {false, "repeat run differs"};
  if (a != c || a != d) return {false, "worker count changes the table"};
  // table must also re-parse losslessly
  const auto parsed = ConvergenceTable::from_csv(a, 0.99);
  if (parsed.to_csv() != a) return {false, "CSV round trip not loss-free"};
  return {true, "byte-identical CSV across repeat runs and 1/3/4 workers (" +
                    std::to_string(parsed.rows.size()) + " rows)"};
}

struct Criterion {
  int number;
  const char* name;
  double time_limit_seconds;  // 0 = none stated
  std::function<CriterionResult()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "width-bounded subset counting identity", 10.0, criterion_counting_identity},
      {2, "occurrence counting against the naive oracle", 10.0, criterion_occurrence_oracle},
      {3, "algebraic identities", 0.0, criterion_algebraic_identities},
      {4, "figure-anchored values", 0.0, criterion_anchored_values},
      {5, "V-shaped sample densities at the square-root scale", 60.0,
       criterion_v_scale_behavior},
      {6, "tiered sample is scale-independent", 120.0, criterion_tiered_scalable},
      {7, "scale-down construction preserves densities", 120.0, criterion_scale_down},
      {8, "two-scale assembly follows its targets", 300.0, criterion_multi_scale},
      {9, "box-pair probe in both directions", 60.0, criterion_two_direction_probe},
      {10, "constant-ratio scale dependence", 60.0, criterion_constant_ratio},
      {11, "CLI convergence-table determinism", 0.0, criterion_cli_determinism},
  };
  return all;
}

int run_one(const Criterion& criterion) {
  const auto start = std::chrono::steady_clock::now();
  CriterionResult result;
  try {
    result = criterion.run();
  } catch (const std::exception& e) {
    result = {false, std::string("exception: ") + e.what()};
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (criterion.time_limit_seconds > 0.0 && elapsed >= criterion.time_limit_seconds) {
    result.pass = false;
    result.detail += " [exceeded " + fmt(criterion.time_limit_seconds) + " s limit]";
  }
  std::cout << (result.pass ? "[PASS]" : "[FAIL]") << " criterion " << criterion.number << ": "
            << criterion.name << " - " << result.detail << " [" << fmt(elapsed) << " s]"
            << std::endl;
  return result.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  std::string which = "all";
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--criterion") which = argv[i + 1];
  }
  int failures = 0;
  for (const Criterion& criterion : criteria()) {
    if (which != "all" && std::to_string(criterion.number) != which) continue;
    failures += run_one(criterion);
  }
  return failures == 0 ? 0 : 1;
}
