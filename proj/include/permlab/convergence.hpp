#pragma once
// Experiment runner: evaluates pattern-density estimates for a sequence
// (component or construction) over a grid of indices, scales and patterns,
// and serializes the result as CSV. Cells draw from substreams derived from
// (seed, index, scale, pattern length), so output is byte-identical across
// runs and worker counts.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "permlab/constructions.hpp"
#include "permlab/counting.hpp"
#include "permlab/density.hpp"
#include "permlab/permutation.hpp"

namespace permlab {

struct ExperimentConfig {
  nlohmann::json sequence;            // component or construction descriptor
  std::vector<std::int64_t> indices;  // term indices (components) or m (constructions)
  std::vector<std::string> scales;    // scaling-function texts
  std::vector<std::string> patterns;  // permutation texts, or "Sk" for all of S_k
  std::int64_t samples = 100000;
  double confidence = 0.99;
  std::uint64_t seed = 0;
  std::int64_t length_cap = 10'000'000;

  static ExperimentConfig from_json(const nlohmann::json& j) {
    ExperimentConfig config;
    config.sequence = j.at("sequence");
    config.indices = j.at("indices").get<std::vector<std::int64_t>>();
    config.scales = j.at("scales").get<std::vector<std::string>>();
    config.patterns = j.at("patterns").get<std::vector<std::string>>();
    config.samples = j.value("samples", std::int64_t{100000});
    config.confidence = j.value("confidence", 0.99);
    config.seed = j.value("seed", std::uint64_t{0});
    config.length_cap = j.value("length_cap", std::int64_t{10'000'000});
    if (config.samples < 1) {
      throw std::invalid_argument("invalid-argument: samples must be >= 1");
    }
    if (!(config.confidence > 0.0 && config.confidence < 1.0)) {
      throw std::invalid_argument("invalid-argument: confidence must lie in (0,1)");
    }
    for (const std::string& s : config.scales) ScalingFunction::parse(s);
    if (config.indices.empty() || config.scales.empty() || config.patterns.empty()) {
      throw std::invalid_argument("invalid-argument: empty experiment axis");
    }
    return config;
  }

  // "S3" expands to all patterns of length 3; anything else parses as a
  // permutation text.
  std::vector<Permutation> expanded_patterns() const {
    std::vector<Permutation> out;
    for (const std::string& text : patterns) {
      if (text.size() >= 2 && text[0] == 'S' &&
          text.find_first_not_of("0123456789", 1) == std::string::npos) {
        const Value k = std::stoll(text.substr(1));
        for (const Permutation& p : all_patterns(k)) out.push_back(p);
      } else {
        out.push_back(parse_permutation(text));
      }
    }
    return out;
  }
};

struct TableRow {
  std::int64_t index = 0;
  BigInt length;
  std::string scale;
  Permutation pattern = Permutation::identity(1);
  std::optional<DensityEstimate> estimate;  // empty when skipped

  bool skipped() const { return !estimate.has_value(); }
};

namespace detail {

inline std::string format_double(double x) {
  char buf[40];
  const auto [last, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, last);
}

inline double parse_double(const std::string& s) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("invalid-argument: bad numeric field '" + s + "'");
  }
  return out;
}

// Compact pattern text when all values are single digits, spaced otherwise;
// parse_permutation reads both.
inline std::string pattern_text(const Permutation& p) {
  bool compact = p.length() > 1 && p.length() <= 9;
  std::string out;
  if (compact) {
    for (Value v : p.values()) out += static_cast<char>('0' + v);
    return out;
  }
  return format_permutation(p);
}

}  // namespace detail

struct ConvergenceTable {
  std::vector<TableRow> rows;

  static constexpr const char* kHeader = "j,n,scale,pattern,value,half_width,samples";

  // Loss-free CSV: doubles in shortest round-trip form; skipped rows carry
  // the literal value `skipped`.
  std::string to_csv() const {
    std::string out(kHeader);
    out += '\n';
    for (const TableRow& row : rows) {
      out += std::to_string(row.index);
      out += ',';
      out += row.length.str();
      out += ',';
      out += row.scale;
      out += ',';
      out += detail::pattern_text(row.pattern);
      out += ',';
      if (row.skipped()) {
        out += "skipped,0,0";
      } else {
        out += detail::format_double(row.estimate->value);
        out += ',';
        out += detail::format_double(row.estimate->half_width);
        out += ',';
        out += std::to_string(row.estimate->samples);
      }
      out += '\n';
    }
    return out;
  }

  static ConvergenceTable from_csv(const std::string& csv, double confidence) {
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line) || line != kHeader) {
      throw std::invalid_argument("invalid-argument: bad CSV header");
    }
    ConvergenceTable table;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::vector<std::string> fields;
      std::string field;
      std::istringstream ls(line);
      while (std::getline(ls, field, ',')) fields.push_back(field);
      if (fields.size() != 7) {
        throw std::invalid_argument("invalid-argument: bad CSV row '" + line + "'");
      }
      TableRow row;
      row.index = std::stoll(fields[0]);
      row.length = BigInt(fields[1]);
      row.scale = fields[2];
      row.pattern = parse_permutation(fields[3]);
      if (fields[4] != "skipped") {
        DensityEstimate est;
        est.value = detail::parse_double(fields[4]);
        est.half_width = detail::parse_double(fields[5]);
        est.samples = std::stoll(fields[6]);
        est.confidence = confidence;
        est.exact = false;
        row.estimate = est;
      }
      table.rows.push_back(std::move(row));
    }
    return table;
  }
};

namespace detail {

struct CellKey {
  std::size_t index_pos;
  std::size_t scale_pos;
  Value pattern_len;
};

struct CellResult {
  bool skipped = true;
  std::map<Permutation, DensityEstimate> estimates;
};

}  // namespace detail

// Evaluates all (index, scale, pattern-length) cells, each from one shared
// sample set, then expands the requested pattern rows in config order.
// Worker threads race over a preassigned cell list, so the table does not
// depend on the thread count.
inline ConvergenceTable run_converge(const ExperimentConfig& config, int threads = 1) {
  if (threads < 1) throw std::invalid_argument("invalid-argument: threads must be >= 1");
  const std::vector<Permutation> patterns = config.expanded_patterns();
  std::vector<Value> pattern_lengths;
  for (const Permutation& p : patterns) {
    if (std::find(pattern_lengths.begin(), pattern_lengths.end(), p.length()) ==
        pattern_lengths.end()) {
      pattern_lengths.push_back(p.length());
    }
  }

  const bool is_construction = config.sequence.contains("kind");
  // Terms materialize once per index and are shared by all scale cells.
  std::vector<std::optional<Permutation>> terms(config.indices.size());
  std::vector<BigInt> lengths(config.indices.size());
  std::optional<ComponentSequence> component;
  if (!is_construction) component = component_from_json(config.sequence);
  for (std::size_t i = 0; i < config.indices.size(); ++i) {
    const std::int64_t index = config.indices[i];
    if (is_construction) {
      nlohmann::json desc = config.sequence;
      desc["length_cap"] = config.length_cap;
      const AssemblyResult result = run_construction(desc, static_cast<int>(index));
      lengths[i] = result.report.total_length;
      if (result.perm.has_value()) terms[i] = std::move(result.perm);
    } else {
      const Permutation term = component->term(index);
      lengths[i] = term.length();
      terms[i] = std::move(term);
    }
  }

  std::vector<detail::CellKey> cells;
  for (std::size_t i = 0; i < config.indices.size(); ++i) {
    for (std::size_t s = 0; s < config.scales.size(); ++s) {
      for (Value k : pattern_lengths) {
        cells.push_back(detail::CellKey{i, s, k});
      }
    }
  }
  std::vector<detail::CellResult> results(cells.size());

  const SeedStream root = SeedStream(config.seed).derive("converge");
  const auto evaluate_cell = [&](std::size_t c) {
    const detail::CellKey& key = cells[c];
    const std::optional<Permutation>& term = terms[key.index_pos];
    if (!term.has_value()) return;  // construction above the cap: skipped
    const ScalingFunction scale = ScalingFunction::parse(config.scales[key.scale_pos]);
    const double n = static_cast<double>(term->length());
    if (n < ScalingFunction::kMinArgument) return;
    const double f = scale.evaluate(n);
    if (std::floor(f + 1e-9) < static_cast<double>(key.pattern_len)) return;
    const SeedStream stream =
        root.derive(static_cast<std::uint64_t>(config.indices[key.index_pos]))
            .derive(static_cast<std::uint64_t>(key.scale_pos))
            .derive(static_cast<std::uint64_t>(key.pattern_len));
    results[c].estimates = estimate_density_vector(*term, key.pattern_len, f, config.samples,
                                                   config.confidence, stream);
    results[c].skipped = false;
  };

  if (threads == 1) {
    for (std::size_t c = 0; c < cells.size(); ++c) evaluate_cell(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t c = next.fetch_add(1);
          if (c >= cells.size()) return;
          evaluate_cell(c);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }

  ConvergenceTable table;
  for (std::size_t i = 0; i < config.indices.size(); ++i) {
    for (std::size_t s = 0; s < config.scales.size(); ++s) {
      for (const Permutation& pattern : patterns) {
        std::size_t cell = 0;
        for (std::size_t c = 0; c < cells.size(); ++c) {
          if (cells[c].index_pos == i && cells[c].scale_pos == s &&
              cells[c].pattern_len == pattern.length()) {
            cell = c;
            break;
          }
        }
        TableRow row;
        row.index = config.indices[i];
        row.length = lengths[i];
        row.scale = config.scales[s];
        row.pattern = pattern;
        if (!results[cell].skipped) {
          row.estimate = results[cell].estimates.at(pattern);
        }
        table.rows.push_back(std::move(row));
      }
    }
  }
  return table;
}

}  // namespace permlab
