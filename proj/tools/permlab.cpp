// permlab: permutation algebra, exact and Monte Carlo pattern densities,
// permuton sampling, sequence constructions, and convergence tables.
//
// Subcommands: ops, count, density, sample-permuton, construct, converge.
// Exit codes: 0 success, 2 validation error, 3 infeasible size (report only).

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "permlab/constructions.hpp"
#include "permlab/convergence.hpp"
#include "permlab/counting.hpp"
#include "permlab/permutation.hpp"
#include "permlab/permuton.hpp"
#include "permlab/scaling.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitInfeasible = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("invalid-argument: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("invalid-argument: cannot write '" + path + "'");
  out << contents;
}

// Permutation argument: a path to a one-line file, or inline text.
permlab::Permutation load_permutation_arg(const std::string& arg) {
  if (std::filesystem::exists(arg)) {
    return permlab::parse_permutation(read_file(arg));
  }
  return permlab::parse_permutation(arg);
}

nlohmann::json load_json_file(const std::string& path) {
  return nlohmann::json::parse(read_file(path));
}

int cmd_ops(const std::string& op, const std::vector<std::string>& inputs) {
  using namespace permlab;
  const auto need = [&](std::size_t count) {
    if (inputs.size() != count) {
      throw std::invalid_argument("invalid-argument: '" + op + "' expects " +
                                  std::to_string(count) + " permutation argument(s)");
    }
  };
  Permutation result = Permutation::identity(1);
  if (op == "inverse") {
    need(1);
    result = inverse(load_permutation_arg(inputs[0]));
  } else if (op == "dsum") {
    need(2);
    result = direct_sum(load_permutation_arg(inputs[0]), load_permutation_arg(inputs[1]));
  } else if (op == "subst") {
    need(2);
    result = substitute(load_permutation_arg(inputs[0]), load_permutation_arg(inputs[1]));
  } else if (op == "box") {
    need(2);
    result = box_product(load_permutation_arg(inputs[0]), load_permutation_arg(inputs[1]));
  } else {
    throw std::invalid_argument("invalid-argument: unknown op '" + op + "'");
  }
  std::cout << format_permutation(result) << "\n";
  return 0;
}

int cmd_count(const std::string& pattern_text, const std::string& perm_arg,
              const std::string& scale_text, double width) {
  using namespace permlab;
  const Permutation pattern = parse_permutation(pattern_text);
  const Permutation host = load_permutation_arg(perm_arg);
  double bound = static_cast<double>(host.length());
  if (width > 0.0) {
    bound = width;
  } else if (!scale_text.empty()) {
    bound = ScalingFunction::parse(scale_text).evaluate(static_cast<double>(host.length()));
  }
  std::cout << count_occurrences_width(pattern, host, bound).str() << "\n";
  return 0;
}

int cmd_density(const std::string& perm_arg, const std::string& pattern_text,
                const std::string& scale_text, const std::string& mode, std::int64_t samples,
                double confidence, std::uint64_t seed) {
  using namespace permlab;
  const Permutation host = load_permutation_arg(perm_arg);
  const Permutation pattern = parse_permutation(pattern_text);
  const double f =
      ScalingFunction::parse(scale_text).evaluate(static_cast<double>(host.length()));
  DensityEstimate estimate;
  if (mode == "exact") {
    estimate = density_at_scale(pattern, host, f);
  } else if (mode == "mc") {
    estimate = estimate_density_at_scale(pattern, host, f, samples, confidence,
                                         SeedStream(seed).derive("density"));
  } else {
    throw std::invalid_argument("invalid-argument: mode must be 'exact' or 'mc'");
  }
  std::cout << estimate.to_json().dump() << "\n";
  return 0;
}

int cmd_sample_permuton(const std::string& descriptor_path, std::int64_t length,
                        std::uint64_t seed) {
  using namespace permlab;
  const Permuton gamma = parse_permuton(load_json_file(descriptor_path));
  Rng rng = SeedStream(seed).derive("sample-permuton").make_rng();
  std::cout << format_permutation(sample_permutation(gamma, length, rng)) << "\n";
  return 0;
}

int cmd_construct(const std::string& descriptor_path, const std::string& out_prefix,
                  std::int64_t length_cap) {
  using namespace permlab;
  nlohmann::json desc = load_json_file(descriptor_path);
  if (length_cap > 0) desc["length_cap"] = length_cap;
  const AssemblyResult result = run_construction(desc);
  write_file(out_prefix + ".report.json", result.report.to_json().dump(2) + "\n");
  if (!result.perm.has_value()) {
    std::cerr << "length " << result.report.total_length.str() << " exceeds cap "
              << result.report.length_cap << "; report written to " << out_prefix
              << ".report.json\n";
    return kExitInfeasible;
  }
  write_file(out_prefix + ".perm.txt", format_permutation(*result.perm) + "\n");
  std::cout << out_prefix << ".perm.txt\n" << out_prefix << ".report.json\n";
  return 0;
}

int cmd_converge(const std::string& config_path, const std::string& out_path,
                 std::int64_t samples_override, std::uint64_t seed_override, bool seed_given,
                 int threads) {
  using namespace permlab;
  nlohmann::json j = load_json_file(config_path);
  if (samples_override > 0) j["samples"] = samples_override;
  if (seed_given) j["seed"] = seed_override;
  const ExperimentConfig config = ExperimentConfig::from_json(j);
  const ConvergenceTable table = run_converge(config, threads);
  const std::string csv = table.to_csv();
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    write_file(out_path, csv);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"permutation pattern densities at arbitrary scales"};
  app.require_subcommand(1);

  // ops
  auto* ops = app.add_subcommand("ops", "permutation algebra: inverse, dsum, subst, box");
  std::string op;
  std::vector<std::string> op_inputs;
  ops->add_option("op", op, "one of inverse|dsum|subst|box")->required();
  ops->add_option("inputs", op_inputs, "permutations (inline text or files)")->required();

  // count
  auto* count = app.add_subcommand("count", "exact occurrence count, optionally width-bounded");
  std::string count_pattern;
  std::string count_perm;
  std::string count_scale;
  double count_width = 0.0;
  count->add_option("pattern", count_pattern, "pattern permutation")->required();
  count->add_option("perm", count_perm, "host permutation (inline or file)")->required();
  count->add_option("--scale", count_scale, "scaling function, evaluated at the host length");
  count->add_option("--width", count_width, "numeric width bound (overrides --scale)");

  // density
  auto* density = app.add_subcommand("density", "pattern density at a scale");
  std::string density_perm;
  std::string density_pattern;
  std::string density_scale = "n";
  std::string density_mode = "exact";
  std::int64_t density_samples = 100000;
  double density_confidence = 0.99;
  std::uint64_t density_seed = 0;
  density->add_option("--perm", density_perm, "host permutation (inline or file)")->required();
  density->add_option("--pattern", density_pattern, "pattern permutation")->required();
  density->add_option("--scale", density_scale, "scaling function text");
  density->add_option("--mode", density_mode, "exact or mc");
  density->add_option("--samples", density_samples, "Monte Carlo sample count");
  density->add_option("--confidence", density_confidence, "confidence level in (0,1)");
  density->add_option("--seed", density_seed, "Monte Carlo seed");

  // sample-permuton
  auto* sample = app.add_subcommand("sample-permuton", "draw a permuton-random permutation");
  std::string sample_descriptor;
  std::int64_t sample_length = 10;
  std::uint64_t sample_seed = 0;
  sample->add_option("descriptor", sample_descriptor, "permuton JSON file")->required();
  sample->add_option("--k,--length", sample_length, "permutation length");
  sample->add_option("--seed", sample_seed, "sampling seed");

  // construct
  auto* construct = app.add_subcommand("construct", "materialize a construction descriptor");
  std::string construct_descriptor;
  std::string construct_out = "construction";
  std::int64_t construct_cap = 0;
  construct->add_option("descriptor", construct_descriptor, "construction JSON file")
      ->required();
  construct->add_option("--out", construct_out, "output prefix");
  construct->add_option("--length-cap", construct_cap, "override the descriptor's length cap");

  // converge
  auto* converge = app.add_subcommand("converge", "convergence table as CSV");
  std::string converge_config;
  std::string converge_out;
  std::int64_t converge_samples = 0;
  std::uint64_t converge_seed = 0;
  int converge_threads = 1;
  converge->add_option("config", converge_config, "experiment config JSON file")->required();
  converge->add_option("--out", converge_out, "CSV output path (default stdout)");
  converge->add_option("--samples", converge_samples, "override the config's sample count");
  auto* seed_opt = converge->add_option("--seed", converge_seed, "override the config's seed");
  converge->add_option("--threads", converge_threads, "worker count (output-invariant)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (ops->parsed()) return cmd_ops(op, op_inputs);
    if (count->parsed()) return cmd_count(count_pattern, count_perm, count_scale, count_width);
    if (density->parsed()) {
      return cmd_density(density_perm, density_pattern, density_scale, density_mode,
                         density_samples, density_confidence, density_seed);
    }
    if (sample->parsed()) {
      return cmd_sample_permuton(sample_descriptor, sample_length, sample_seed);
    }
    if (construct->parsed()) {
      return cmd_construct(construct_descriptor, construct_out, construct_cap);
    }
    if (converge->parsed()) {
      return cmd_converge(converge_config, converge_out, converge_samples, converge_seed,
                          seed_opt->count() > 0, converge_threads);
    }
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
