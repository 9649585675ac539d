#pragma once
// Component sequences: deterministic index -> permutation maps that realize
// limit targets operationally. Shipped kinds produce a term of length exactly
// j for every index j; derived sequences (retargeted, paired) may not, and
// advertise term lengths through a closed-form length map so callers can
// search indices without materializing terms.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "permlab/permutation.hpp"
#include "permlab/permuton.hpp"
#include "permlab/rng.hpp"

namespace permlab {

class ComponentSequence {
 public:
  using Generator = std::function<Permutation(Value)>;
  using LengthMap = std::function<Value(Value)>;

  // Terms sampled from a permuton; term j depends only on (seed, j), so the
  // sequence is reproducible and random-access.
  static ComponentSequence permuton_random(Permuton gamma, std::uint64_t seed) {
    nlohmann::json desc = {{"type", "permuton"},
                           {"descriptor", permuton_to_json(gamma)},
                           {"seed", seed}};
    auto gen = [gamma = std::move(gamma), seed](Value j) {
      Rng rng = SeedStream(seed).derive("component").derive(static_cast<std::uint64_t>(j))
                    .make_rng();
      return sample_permutation(gamma, j, rng);
    };
    return ComponentSequence(std::move(gen), identity_length(), std::move(desc), true);
  }

  // floor(j/|base|) copies of the base pattern, padded to length j with a
  // trailing identity block.
  static ComponentSequence periodic(Permutation base) {
    nlohmann::json desc = {{"type", "periodic"}, {"base", format_permutation(base)}};
    auto gen = [base = std::move(base)](Value j) {
      const Value b = base.length();
      const Value copies = j / b;
      const Value rest = j % b;
      if (copies == 0) return Permutation::identity(j);
      Permutation body = direct_sum_power(base, copies);
      if (rest == 0) return body;
      return direct_sum(body, Permutation::identity(rest));
    };
    return ComponentSequence(std::move(gen), identity_length(), std::move(desc), true);
  }

  // Explicit terms: perms[i] must have length i+1.
  static ComponentSequence explicit_list(std::vector<Permutation> perms) {
    nlohmann::json listed = nlohmann::json::array();
    for (std::size_t i = 0; i < perms.size(); ++i) {
      if (perms[i].length() != static_cast<Value>(i) + 1) {
        throw std::invalid_argument("invalid-argument: explicit term " + std::to_string(i + 1) +
                                    " has the wrong length");
      }
      listed.push_back(format_permutation(perms[i]));
    }
    nlohmann::json desc = {{"type", "explicit"}, {"perms", listed}};
    auto gen = [perms = std::move(perms)](Value j) {
      if (j < 1 || j > static_cast<Value>(perms.size())) {
        throw std::invalid_argument("invalid-argument: explicit sequence has no term " +
                                    std::to_string(j));
      }
      return perms[static_cast<std::size_t>(j - 1)];
    };
    return ComponentSequence(std::move(gen), identity_length(), std::move(desc), true);
  }

  // Shipped descriptor kinds; derived kinds are handled in constructions.
  static ComponentSequence from_json(const nlohmann::json& j);

  ComponentSequence(Generator gen, LengthMap len, nlohmann::json descriptor, bool every_length)
      : gen_(std::move(gen)),
        len_(std::move(len)),
        descriptor_(std::move(descriptor)),
        every_length_(every_length) {}

  Permutation term(Value j) const {
    if (j < 1) throw std::invalid_argument("invalid-argument: term index must be >= 1");
    return gen_(j);
  }

  // Length of term(j) without materializing it.
  Value term_length(Value j) const {
    if (j < 1) throw std::invalid_argument("invalid-argument: term index must be >= 1");
    return len_(j);
  }

  const nlohmann::json& descriptor() const { return descriptor_; }
  bool every_length() const { return every_length_; }

 private:
  static LengthMap identity_length() {
    return [](Value j) { return j; };
  }

  Generator gen_;
  LengthMap len_;
  nlohmann::json descriptor_;
  bool every_length_;
};

inline ComponentSequence ComponentSequence::from_json(const nlohmann::json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "permuton") {
    return permuton_random(parse_permuton(j.at("descriptor")),
                           j.at("seed").get<std::uint64_t>());
  }
  if (type == "periodic") {
    return periodic(parse_permutation(j.at("base").get<std::string>()));
  }
  if (type == "explicit") {
    std::vector<Permutation> perms;
    for (const auto& p : j.at("perms")) {
      perms.push_back(parse_permutation(p.get<std::string>()));
    }
    return explicit_list(std::move(perms));
  }
  throw std::invalid_argument("invalid-argument: unknown component type '" + type + "'");
}

}  // namespace permlab
